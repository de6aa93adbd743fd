import json

from main import EXIT_FALSE, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out else None


def test_certify_feasible(capsys):
    code, report = run(capsys, "certify", "--p1", "1/2,1/3", "--p2", "1/2,1/4")
    assert code == EXIT_OK
    assert report["schema"] == 1
    assert report["feasible"] is True
    assert report["bound"] == "1/4"


def test_certify_third(capsys):
    code, report = run(capsys, "certify", "--third", "--p1", "1/3,1/4", "--p2", "1/3,1/5")
    assert code == EXIT_OK
    assert report["kind"] == "third"
    assert report["bound"] == "1/9"


def test_certify_large_p_fails_with_hint(capsys):
    code, report = run(capsys, "certify", "--p1", "3/5,1/3", "--p2", "1/2,1/3")
    assert code == EXIT_FALSE
    assert report["feasible"] is False
    assert "chain" in report["hint"]


def test_decimal_input_is_a_usage_error(capsys):
    code, report = run(capsys, "certify", "--p1", "0.5,1/3")
    assert code == EXIT_USAGE
    assert report is None


def test_oracle_size_cap(capsys):
    code, _ = run(capsys, "oracle", "--n", "6", "--p1", "1/2")
    assert code == EXIT_USAGE


def test_oracle_report(capsys):
    code, report = run(capsys, "oracle", "--p1", "1/2,1/3,1/4")
    assert code == EXIT_OK
    assert report["max_product"] == "1/4"
    assert report["stars_only"] is True
    assert report["non_monotone_samples"] == 200
    assert report["non_monotone_violations"] == 0


def test_audit_star_pair(capsys, family_file):
    star = family_file([[1], [1, 2], [1, 3], [1, 2, 3]], "star.json", n=3)
    code, report = run(capsys, "audit", "--p1", "1/2,1/2,1/2", "--family1", star, "--family2", star)
    assert code == EXIT_OK
    assert report["cross_independent"] is True
    assert report["complementary_slackness"] is True
    assert report["gap_squared"] == "0"
    assert abs(report["block_path_s_dot_x"]) < 1e-9


def test_audit_disjoint_pair(capsys, family_file):
    first = family_file([[1]], "a.json", n=2)
    second = family_file([[2]], "b.json", n=2)
    code, report = run(capsys, "audit", "--p1", "1/2,1/2", "--family1", first, "--family2", second)
    assert code == EXIT_FALSE
    assert report["cross_independent"] is False
    assert report["edge_violations"]


def test_audit_large_p_attaches_chain(capsys, family_file):
    star = family_file([[1], [1, 2]], "star.json", n=2)
    code, report = run(capsys, "audit", "--p1", "3/5,1/3", "--family1", star, "--family2", star)
    assert code == EXIT_OK
    assert report["chain"]["all_links_hold"] is True
    assert report["certificate"]["pv1"] == ["1/3", "1/3"]


def test_chain_command(capsys, family_file):
    star = family_file([[1], [1, 2]], "star.json", n=2)
    code, report = run(capsys, "chain", "--p1", "3/5,1/3", "--family1", star, "--family2", star)
    assert code == EXIT_OK
    assert report["equality"] is True
    assert report["pv1_tilde"] == ["1/3", "1/3"]


def test_chain_needs_large_p(capsys, family_file):
    star = family_file([[1], [1, 2]], "star.json", n=2)
    code, _ = run(capsys, "chain", "--p1", "1/2,1/3", "--family1", star, "--family2", star)
    assert code == EXIT_USAGE


def test_probe_single(capsys):
    code, report = run(capsys, "probe", "single", "--p", "3/5,3/5,3/5")
    assert code == EXIT_OK
    assert report["max_measure"] == "81/125"
    assert report["counterexample_value"] == "81/125"


def test_probe_weak_precondition(capsys):
    code, _ = run(capsys, "probe", "weak", "--p1", "1/2,1/2", "--p2", "1/3,1/2")
    assert code == EXIT_USAGE


def test_probe_stability_custom_grid(capsys):
    code, report = run(capsys, "probe", "stability", "--p1", "1/3,1/3", "--eps", "1/10,1/50")
    assert code == EXIT_OK
    assert report["eps_grid"] == ["1/50", "1/10"]
    assert [point["eps"] for point in report["worst"]] == ["1/50", "1/10"]
    assert {point["eps"] for point in report["points"]} == {"1/50", "1/10"}


def test_examples(capsys):
    code, report = run(capsys, "examples")
    assert code == EXIT_OK
    assert report["all_passed"] is True


def test_output_file(capsys, tmp_path):
    target = tmp_path / "reports" / "certify.json"
    code, report = run(capsys, "certify", "--p1", "1/2,1/3", "--p2", "1/2,1/4", "--output", str(target))
    assert code == EXIT_OK
    assert report is None
    assert json.loads(target.read_text(encoding="utf-8"))["bound"] == "1/4"


def test_output_is_deterministic(capsys):
    argv = ("oracle", "--p1", "1/2,1/3", "--p2", "1/3,1/2", "--seed", "5")
    main(list(argv))
    first = capsys.readouterr().out
    main(list(argv))
    assert capsys.readouterr().out == first
