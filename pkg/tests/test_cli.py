import json
import subprocess
import sys

import jsonschema
import pytest

from ncdist import io
from ncdist.cli import main


def run(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(args + ["--output", str(out)])
    text = out.read_text() if out.exists() else ""
    return code, text


@pytest.fixture
def causet_file(tmp_path):
    path = tmp_path / "cs.json"
    assert main(["sprinkle", "--count", "30", "--seed", "3", "--output", str(path)]) == 0
    return path


def first_related_pair(path):
    cs = io.causet_from_dict(json.loads(path.read_text()))
    import numpy as np

    i, j = np.argwhere(cs.relation)[0]
    return cs.ids[i], cs.ids[j], cs


def test_sprinkle_schema(causet_file):
    jsonschema.validate(json.loads(causet_file.read_text()), io.load_schema("causal_set"))


def test_sprinkle_csv(tmp_path):
    code, text = run(["sprinkle", "--count", "3", "--format", "csv"], tmp_path, "s.csv")
    assert code == 0 and text.startswith("id,t,x\n") and text.count("\n") == 4


def test_connes_two_point(tmp_path):
    code, text = run(["connes-dist", "--fixture", "two-point", "--m", "2", "--p", "0", "--q", "1"], tmp_path)
    rec = json.loads(text)
    assert code == 0
    jsonschema.validate(rec, io.load_schema("record"))
    jsonschema.validate(rec["result"], io.load_schema("distance_result"))
    assert rec["result"]["lower"] == 0.5 and rec["result"]["upper"] == 0.5


def test_lorentz_dist(tmp_path, causet_file):
    p, q, _ = first_related_pair(causet_file)
    code, text = run(["lorentz-dist", "--causet", str(causet_file), "--p", str(p), "--q", str(q)], tmp_path)
    assert code == 0
    res = json.loads(text)["result"]
    jsonschema.validate(res, io.load_schema("lorentz_result"))
    assert res["value"] == pytest.approx(res["case_report"]["analytic_tau"], abs=1e-9)
    assert res["case_report"]["witness_violations"] == 0


def test_lorentz_bruteforce(tmp_path, causet_file):
    small = tmp_path / "small.json"
    assert main(["sprinkle", "--count", "4", "--seed", "1", "--output", str(small)]) == 0
    p, q, _ = first_related_pair(small)
    code, text = run(["lorentz-dist", "--causet", str(small), "--p", str(p), "--q", str(q), "--bruteforce"], tmp_path)
    assert code == 0
    bf = json.loads(text)["result"]["case_report"]["bruteforce"]
    assert bf["mode"] == "exact" and bf["value"] <= json.loads(text)["result"]["value"] + 1e-9
    # instances past the enumeration cap are rejected as invalid input
    p, q, _ = first_related_pair(causet_file)
    code, _ = run(["lorentz-dist", "--causet", str(causet_file), "--p", str(p), "--q", str(q), "--bruteforce"], tmp_path)
    assert code == 2


def test_lorentz_not_related(tmp_path, causet_file):
    import numpy as np

    _, _, cs = first_related_pair(causet_file)
    i, j = np.argwhere(~cs.relation & ~cs.relation.T & ~np.eye(cs.n, dtype=bool))[0]
    code, _ = run(["lorentz-dist", "--causet", str(causet_file), "--p", str(cs.ids[i]), "--q", str(cs.ids[j])], tmp_path)
    assert code == 3


def test_invalid_inputs(tmp_path):
    assert run(["lorentz-dist", "--causet", str(tmp_path / "missing.json"), "--p", "0", "--q", "1"], tmp_path)[0] == 2
    assert run(["connes-dist", "--p", "0", "--q", "1"], tmp_path)[0] == 2
    assert run(["convergence", "--densities", "20,10"], tmp_path)[0] == 2
    assert run(["krein-check", "--canonical", "1,0", "--gram", str(tmp_path / "nope")], tmp_path)[0] == 2
    assert main(["order-recover", "--seed", "-1"]) == 2


def test_singular_gram_exit_code(tmp_path):
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"dim": 2, "gram": [[1, 0], [0, 0], [0, 0], [0, 0]]}))
    assert run(["krein-check", "--gram", str(g)], tmp_path)[0] == 2


def test_cauchy_continuum(tmp_path):
    code, text = run(["cauchy-verify", "--n-pairs", "500"], tmp_path)
    rec = json.loads(text)
    assert code == 0
    jsonschema.validate(rec["result"], io.load_schema("cauchy_report"))
    assert rec["result"]["equality"]["pass"]


def test_cauchy_discrete_reports_failure(tmp_path):
    cs = tmp_path / "cs.json"
    cs.write_text(json.dumps({
        "events": [{"id": i, "t": t, "x": x} for i, (t, x) in enumerate([(0, 0), (1, -0.5), (1, 0.5), (2, 0)])],
        "relations": [[0, 1], [0, 2], [1, 3], [2, 3]],
    }))
    code, text = run(["cauchy-verify", "--model", str(cs), "--surface-ids", "1,2"], tmp_path)
    assert code == 1
    assert "equality_gap" in json.loads(text)["result"]


def test_checks_pass(tmp_path):
    assert run(["order-recover", "--random-n", "6"], tmp_path)[0] == 0
    assert run(["istar-check", "--dim", "3"], tmp_path)[0] == 0
    assert run(["istar-check", "--cone", "identity"], tmp_path)[0] == 1
    code, text = run(["krein-check"], tmp_path)
    assert code == 0 and json.loads(text)["result"]["gamma1_krein_selfadjoint"]
    assert run(["krein-check", "--random-dim", "5"], tmp_path)[0] == 0


def test_convergence(tmp_path):
    code, text = run(["convergence", "--densities", "20,40", "--repeats", "2", "--format", "csv"], tmp_path, "c.csv")
    assert code == 0
    assert text.splitlines()[0] == "density,mean_value,analytic_tau,ratio,value_le_tau"


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# two-point run\nfixture = two-point\nm = 4\np = 0\nq = 1\n")
    code, text = run(["connes-dist", "--config", str(cfg)], tmp_path)
    assert code == 0 and json.loads(text)["result"]["lower"] == 0.25
    code, text = run(["connes-dist", "--config", str(cfg), "--m", "0.5"], tmp_path)
    rec = json.loads(text)
    assert rec["result"]["lower"] == 2.0 and rec["config"]["m"] == 0.5
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense\n")
    assert main(["connes-dist", "--config", str(bad)]) == 2


def test_timing_only_on_request(tmp_path):
    _, text = run(["order-recover"], tmp_path)
    assert "wall_time_s" not in json.loads(text)
    _, text = run(["order-recover", "--timing"], tmp_path)
    assert "wall_time_s" in json.loads(text)


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "ncdist", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip()
