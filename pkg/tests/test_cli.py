import json

import pytest

from latmc import cli
from conftest import MODEL_A


def run_cli(argv, capsys):
    with pytest.raises(SystemExit) as exit_info:
        cli.main(argv)
    out = capsys.readouterr().out
    return exit_info.value.code, [line for line in out.splitlines() if line]


def write_model(tmp_path, doc, name="model.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_check_fml(tmp_path, capsys):
    path = write_model(tmp_path, MODEL_A)
    code, lines = run_cli(["check", "--model", path,
                           "--formula", "mu u. p \\/ <> u"], capsys)
    assert code == 0
    assert json.loads(lines[0]) == {"s0": "1", "s1": "1"}
    assert "diagnostic" in json.loads(lines[1])


def test_check_ctl_powerset_max(tmp_path, capsys):
    path = write_model(tmp_path, MODEL_A)
    code, lines = run_cli(["check", "--model", path, "--logic", "ctl",
                           "--exec", "powerset-max",
                           "--formula", "A (tt U p)"], capsys)
    assert code == 0
    assert json.loads(lines[0]) == {"s0": "0", "s1": "1"}


def test_check_with_environment(tmp_path, capsys):
    path = write_model(tmp_path, MODEL_A)
    env = tmp_path / "env.json"
    env.write_text(json.dumps({"u": {"s1": "1"}}))
    code, lines = run_cli(["check", "--model", path, "--formula", "<> u",
                           "--env", str(env)], capsys)
    assert code == 0
    assert json.loads(lines[0]) == {"s0": "1", "s1": "1"}


def test_encode_prints_expected_surface(capsys):
    code, lines = run_cli(["encode", "--formula", "E (p U q)"], capsys)
    assert code == 0
    assert lines[0] == "mu u. q \\/ (p /\\ <> u)"


def test_equiv_clean_corpus(tmp_path, capsys):
    write_model(tmp_path, MODEL_A, "a.json")
    code, lines = run_cli(["--seed", "3", "equiv", "--dir", str(tmp_path),
                           "--count", "5"], capsys)
    assert code == 0
    assert json.loads(lines[-1])["equal"] is True


def test_equiv_detects_seeded_bug(tmp_path, capsys, monkeypatch):
    # corrupt the transferred model: the differential driver must exit 1
    write_model(tmp_path, MODEL_A, "a.json")
    from latmc.models import Continuation, Evaluator, to_continuation
    from latmc.lattice import LatticeElem

    class Stuck(Evaluator):
        monotone_verified = True

        def __init__(self, lattice, states):
            self.lattice = lattice
            self.states = states

        def __call__(self, k):
            return LatticeElem(self.lattice, self.lattice.bottom)

    def broken(m):
        cm = to_continuation(m)
        succ = dict(cm.coalgebra.succ)
        succ[m.states[0]] = Stuck(m.lattice, m.states)
        return type(cm)(cm.lattice, cm.states, cm.labeling,
                        Continuation(succ), flavor="plain")

    monkeypatch.setattr(cli, "to_continuation", broken)
    code, lines = run_cli(["--seed", "3", "equiv", "--dir", str(tmp_path),
                           "--count", "20"], capsys)
    assert code == 1
    assert any(json.loads(l).get("equal") is False for l in lines)


def test_exec_map_query(tmp_path, capsys):
    doc = dict(MODEL_A)
    doc["coalgebra"] = {"kind": "nonempty-powerset",
                        "succ": {"s0": ["s0", "s1"], "s1": ["s1"]}}
    path = write_model(tmp_path, doc)
    code, lines = run_cli(["exec-map", "--model", path, "--polarity", "max",
                           "--query", "E (p U q)@s1"], capsys)
    assert code == 0
    report = json.loads(lines[0])
    assert report["value"] == "1"  # p holds at s1, so the until fires now
    assert report["orbit_size"] > 0


def test_exec_map_bad_query(tmp_path, capsys):
    path = write_model(tmp_path, MODEL_A)
    code, _ = run_cli(["exec-map", "--model", path, "--query", "E X p"],
                      capsys)
    assert code == 2


def test_charfix_report(tmp_path, capsys):
    doc = dict(MODEL_A)
    doc["coalgebra"] = {"kind": "nonempty-powerset",
                        "succ": {"s0": ["s0", "s1"], "s1": ["s1"]}}
    path = write_model(tmp_path, doc)
    code, lines = run_cli(["charfix", "--model", path,
                           "--formula", "E X p"], capsys)
    assert code == 0
    report = json.loads(lines[0])
    assert report["class"] == "CtlNoUW" and report["holds"] is True


def test_lint_valid_and_invalid(tmp_path, capsys):
    good = write_model(tmp_path, MODEL_A, "good.json")
    bad = write_model(tmp_path, {"lattice": {"kind": "builtin",
                                             "name": "bool2"},
                                 "states": ["s0"], "atoms": {},
                                 "coalgebra": {"kind": "powerset",
                                               "succ": {"s0": ["zz"]}}},
                      "bad.json")
    code, lines = run_cli(["lint", good, bad], capsys)
    assert code == 2
    reports = [json.loads(l) for l in lines]
    assert reports[0]["valid"] is True
    assert reports[1]["valid"] is False


def test_laws_identity(capsys):
    code, lines = run_cli(["laws", "--morphism", "identity"], capsys)
    assert code == 0
    assert json.loads(lines[-1])["passed"] is True


def test_laws_beta(capsys):
    code, lines = run_cli(["laws", "--morphism", "beta",
                           "--max-states", "1"], capsys)
    assert code == 0


def test_oracle_extrema_suite(capsys):
    code, lines = run_cli(["--seed", "5", "oracle", "--suite", "extrema"],
                          capsys)
    assert code == 0
    assert all(json.loads(l)["ok"] for l in lines)


def test_usage_error_on_missing_file(capsys):
    code, lines = run_cli(["check", "--model", "/nonexistent.json",
                           "--formula", "tt"], capsys)
    assert code == 2


def test_validation_error_is_machine_readable(tmp_path, capsys):
    bad = write_model(tmp_path, {"lattice": {"kind": "builtin",
                                             "name": "bool2"},
                                 "states": ["s0"], "atoms": {},
                                 "coalgebra": {"kind": "nonempty-powerset",
                                               "succ": {"s0": []}}})
    code, lines = run_cli(["check", "--model", bad, "--formula", "tt"],
                          capsys)
    assert code == 2
    assert json.loads(lines[0])["error"] == "empty-successor"


def test_output_deterministic_with_fixed_seed(tmp_path, capsys):
    write_model(tmp_path, MODEL_A, "a.json")
    argv = ["--seed", "9", "equiv", "--dir", str(tmp_path), "--count", "8"]
    _, first = run_cli(argv, capsys)
    _, second = run_cli(argv, capsys)
    assert first == second


def test_predicate_serialization_roundtrip():
    from latmc.lattice import builtin_lattice
    from latmc.models import Predicate
    lat = builtin_lattice("chain3")
    states = ("s0", "s1", "s2")
    p = Predicate(lat, states, (0, 1, 2))
    assert Predicate.from_dict(lat, states, p.to_json()) == p


def test_oracle_trinity_suite(capsys):
    code, lines = run_cli(["oracle", "--suite", "trinity"], capsys)
    assert code == 0
    assert all(json.loads(l)["passed"] for l in lines)


def test_check_ctl_min_engine(tmp_path, capsys):
    doc = dict(MODEL_A)
    doc["coalgebra"] = {"kind": "nonempty-powerset",
                        "succ": {"s0": ["s0", "s1"], "s1": ["s1"]}}
    path = write_model(tmp_path, doc)
    code, lines = run_cli(["check", "--model", path, "--logic", "ctl",
                           "--exec", "min", "--formula", "E X p"], capsys)
    assert code == 0
    assert json.loads(lines[0]) == {"s0": "1", "s1": "1"}


def test_charfix_with_condition_report(tmp_path, capsys):
    doc = dict(MODEL_A)
    doc["coalgebra"] = {"kind": "nonempty-powerset",
                        "succ": {"s0": ["s0", "s1"], "s1": ["s1"]}}
    path = write_model(tmp_path, doc)
    code, lines = run_cli(["charfix", "--model", path,
                           "--formula", "E (p W q)",
                           "--hold", "p", "--goal", "q"], capsys)
    assert code == 0
    assert "until_inequality_holds" in json.loads(lines[1])
