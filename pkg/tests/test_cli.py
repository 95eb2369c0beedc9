import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from hecke import cli
from hecke.classical import TorusElem0
from hecke.errors import DepthError
from hecke.root_datum import parse_group

SCHEMAS = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def validator(name):
    store = {f"{p.stem}": json.loads(p.read_text()) for p in SCHEMAS.glob("*.json")}
    resolver_store = {s["$id"]: s for s in store.values()}
    from referencing import Registry, Resource

    registry = Registry().with_resources(
        [(k, Resource.from_contents(v)) for k, v in resolver_store.items()]
    )
    return jsonschema.Draft202012Validator(schema(name), registry=registry)


def run(capsys, *argv, environ=None):
    code = cli.main(list(argv), environ=environ or {})
    out, err = capsys.readouterr()
    return code, out, err


T2 = json.dumps({"support": [{"cochar": [-2, 0], "coeff": 1}]})


def test_satake0_example(capsys):
    code, out, _ = run(capsys, "satake0", "--group", "PGL2", "--p", "5", "--a", "1", "--elem", T2, "--levi", "torus")
    assert code == 0
    G = parse_group("PGL2")
    want = TorusElem0(G, 5, 1, {(-2, 0): 1, (0, 0): -1}).to_json()
    assert json.loads(out) == want
    validator("hecke_elem0").validate(json.loads(out))


def test_convolve_identity_is_byte_identical(capsys):
    X = {"support": [{"cochar": [-3, 0], "coeff": 2}, {"cochar": [-1, 0], "coeff": 3}]}
    one = {"support": [{"cochar": [0, 0], "coeff": 1}]}
    code, out, _ = run(capsys, "convolve", "--left", json.dumps(one), "--right", json.dumps(X))
    code2, out2, _ = run(capsys, "convolve", "--left", json.dumps(X), "--right", json.dumps(one))
    assert code == code2 == 0 and out == out2
    from hecke.classical import HeckeElem0

    canon = HeckeElem0.from_json(X, parse_group("PGL2"), 5, 1).to_json()
    assert out == cli.dumps(canon) + "\n"


def test_mixed_convolution_cli(capsys):
    f3 = {"degree": 1, "support": [{"cochar": [-3, 0], "coeff": 1}]}
    T2e = json.loads(T2)
    code, out, _ = run(capsys, "convolve", "--left", json.dumps(T2e), "--right", json.dumps(f3))
    assert code == 0
    res = json.loads(out)
    validator("hecke_elem1").validate(res)
    assert res["support"] == [{"cochar": [-5, 0], "coeff": 1}, {"cochar": [-3, 0], "coeff": 4}]
    code, out, err = run(capsys, "convolve", "--left", json.dumps(f3), "--right", json.dumps(f3))
    assert code == 7 and out == ""


def test_satake1_cli(capsys):
    code, out, _ = run(capsys, "satake1", "--group", "PGL2", "--p", "5", "--a", "1", "--f-cell", "3", "--mu-box", "6")
    assert code == 0
    res = json.loads(out)
    validator("satake1_output").validate(res)
    assert res["result"]["support"] == [
        {"cochar": [-3, 0], "wedge": [1], "coeff": 1},
        {"cochar": [-1, 0], "wedge": [1], "coeff": 4},
    ]
    assert len(res["provenance"]) == 13
    validator("torus_dha").validate(res["result"])


@pytest.mark.parametrize(
    "argv,code",
    [
        (["satake0", "--elem", "{bad"], 3),
        (["satake0", "--elem", '{"support": [{"cochar": [1, 0], "coeff": 1}]}'], 3),
        (["satake0", "--cell=-2,0", "--p", "6"], 3),
        (["satake0", "--cell=-2,0", "--precision", "5"], 5),
        (["satake0", "--cell=-9,0", "--budget", "10"], 4),
        (["satake0", "--elem", json.dumps({"group": {"family": "GL", "n": 2}, "support": []})], 8),
        (["satake0", "--elem", json.dumps({"p": 7, "support": []})], 8),
        (["satake1", "--f-cell", "5", "--precision", "4"], 5),
        (["satake1", "--group", "GL2", "--f-cell", "2"], 7),
        (["satake0", "--cell=1,2,3"], 3),
        (["satake1", "--f-cell", "1"], 3),
        (["satake1", "--group", "SL2", "--f-cell", "3"], 3),
    ],
)
def test_exit_codes_and_no_partial_output(capsys, argv, code):
    got, out, err = run(capsys, *argv)
    assert got == code and out == "" and err


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["satake0", "--bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "nonsense"])
    assert exc.value.code == 2


def test_depth_error_code(capsys, monkeypatch):
    def boom(*args, **kw):
        raise DepthError("fiber count changed one level deeper")

    monkeypatch.setattr(cli, "satake0", boom)
    code, out, err = run(capsys, "table")
    assert code == 6 and out == "" and "DepthError" in err


def test_env_overrides(capsys):
    code, out, _ = run(capsys, "satake0", "--cell=-1,0", environ={"HECKE_P": "7", "HECKE_A": "2"})
    res = json.loads(out)
    assert res["p"] == 7 and res["ring"] == {"mod_p_power": 2}
    code, out, _ = run(capsys, "satake0", "--cell=-1,0", "--p", "5", environ={"HECKE_P": "7"})
    assert json.loads(out)["p"] == 5
    code, out, _ = run(capsys, "satake0", "--cell=-1,0", environ={"HECKE_P": "x"})
    assert code == 3 and out == ""


def test_verify_deterministic(capsys):
    runs = [run(capsys, "verify", "example15", "--p", "5", "--seed", "3") for _ in range(2)]
    assert runs[0][0] == 0 and runs[0][1] == runs[1][1]
    rep = json.loads(runs[0][1])
    validator("verification_report").validate(rep)
    assert rep["passed"] and rep["n_failed"] == 0
    code, out, _ = run(capsys, "verify", "transfer")
    assert code == 0 and json.loads(out)["n_checks"] >= 50


def test_table_format(capsys):
    code, out, _ = run(capsys, "table", "--height", "2", "--format", "table")
    assert code == 0 and out.splitlines()[0].startswith("T[")


def test_cache_lifecycle(capsys, tmp_path, caplog):
    cache = str(tmp_path / "c")
    code, out, _ = run(capsys, "cache", "inspect", "--cache-dir", cache)
    assert code == 0 and json.loads(out)["records"] == []
    code, cold, err1 = run(capsys, "satake1", "--f-cell", "4", "--cache-dir", cache)
    code, warm, err2 = run(capsys, "satake1", "--f-cell", "4", "--cache-dir", cache)
    assert cold == warm
    assert json.loads(err2)["stats"]["cache_hits"] > 0
    assert json.loads(err1)["stats"]["cache_hits"] == 0
    # corrupt one record: it is skipped with a warning and recomputed
    path = tmp_path / "c" / "records.ljson"
    data = path.read_bytes()
    first_nl = data.index(b"\n")
    size = int(data[:first_nl])
    body = bytearray(data[first_nl + 1 : first_nl + 1 + size])
    body[:1] = b"#"
    path.write_bytes(data[: first_nl + 1] + bytes(body) + data[first_nl + 1 + size :])
    code, again, err3 = run(capsys, "satake1", "--f-cell", "4", "--cache-dir", cache)
    assert again == cold
    assert "unreadable record" in caplog.text
    code, out, _ = run(capsys, "cache", "inspect", "--cache-dir", cache)
    assert json.loads(out)["corrupted"] == 1
    code, out, _ = run(capsys, "cache", "clear", "--cache-dir", cache)
    code, out, _ = run(capsys, "cache", "inspect", "--cache-dir", cache)
    assert json.loads(out)["records"] == []


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hecke", "satake0", "--cell=-1,0"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["support"][0] == {"cochar": [-1, 0], "coeff": 1}
