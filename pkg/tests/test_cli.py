import orjson
import pytest

from app.config import settings
from app.models.errors import InvariantBreach
from app.models.identity import SelftestSummary
from app.services.algebra import Poly
from app.services.identity_registry import Sides, identity_registry
from app.services.selftest_service import selftest_service
from main import app


def run(runner, *args):
    return runner.invoke(app, list(args))


def payload(result):
    return orjson.loads(result.stdout)


class TestStats:
    def test_colored_window(self, runner):
        result = run(runner, "stats", "5 1[1] 3 4[2] 2[1] 6[3]", "--r", "4")
        assert result.exit_code == 0, result.stderr
        data = payload(result)
        assert data["len_G"] == 29
        assert data["col"] == 7
        assert data["len_B"] is None

    def test_signed_window(self, runner):
        result = run(runner, "stats", "--r", "2", "--", "-2 3 -5 -1 -4")
        assert result.exit_code == 0, result.stderr
        data = payload(result)
        assert data["len_D"] == 14
        assert (data["ddes"], data["dmaj"], data["sgm"]) == (5, 13, 1)

    def test_output_is_canonical(self, runner):
        result = run(runner, "stats", "2 1", "--r", "1")
        assert result.stdout.endswith("}\n")
        keys = list(payload(result))
        assert keys == sorted(keys)

    def test_bad_window_is_a_usage_error(self, runner):
        result = run(runner, "stats", "1 1 2", "--r", "3")
        assert result.exit_code == 2
        assert "repeated" in result.stderr
        assert result.stdout == ""

    def test_table_output(self, runner):
        result = run(runner, "stats", "2 1[1]", "--r", "3", "--output", "table")
        assert result.exit_code == 0
        assert "len_G" in result.stdout


class TestEnumerate:
    def test_signed_family(self, runner):
        result = run(runner, "enumerate", "--family", "b", "--n", "2", "--limit", "3")
        assert result.exit_code == 0, result.stderr
        assert result.stdout.splitlines() == ["1 2", "1 -2", "-1 2"]

    def test_family_size(self, runner):
        result = run(runner, "enumerate", "--family", "d", "--n", "3")
        assert len(result.stdout.splitlines()) == 24

    def test_restricted_family(self, runner, restriction_file):
        path = restriction_file([[0, 2], [2, 3]])
        result = run(runner, "enumerate", "--family", "g", "--r", "4", "--n", "2", "--restriction", str(path))
        assert result.exit_code == 0, result.stderr
        assert result.stdout.splitlines()[:4] == ["1 2[2]", "1 2[3]", "1[2] 2[2]", "1[2] 2[3]"]
        assert len(result.stdout.splitlines()) == 8

    @pytest.mark.parametrize(
        "args",
        [
            ("--family", "sym", "--n", "3", "--r", "2"),
            ("--family", "g", "--n", "2"),
            ("--family", "d", "--n", "2", "--restriction", "missing.json"),
        ],
    )
    def test_usage_errors(self, runner, args):
        assert run(runner, "enumerate", *args).exit_code == 2

    def test_restriction_length_must_match(self, runner, restriction_file):
        path = restriction_file(["+", "-"])
        result = run(runner, "enumerate", "--family", "b", "--n", "3", "--restriction", str(path))
        assert result.exit_code == 2

    @pytest.mark.parametrize(
        "args, data, message",
        [
            (("--family", "b", "--n", "3"), [[0], [5], [0, 1]], "outside 0..1"),
            (("--family", "sym", "--n", "2"), [[0], [1]], "outside 0..0"),
        ],
    )
    def test_bad_restriction_colors_give_one_line(self, runner, restriction_file, args, data, message):
        path = restriction_file(data)
        result = run(runner, "enumerate", *args, "--restriction", str(path))
        assert result.exit_code == 2
        assert message in result.stderr
        assert len(result.stderr.strip().splitlines()) == 1


class TestInvolutions:
    def test_involute(self, runner):
        result = run(runner, "involute", "--tag", "psi-b", "--", "-2 1 3 -5 6 4")
        assert result.exit_code == 0, result.stderr
        assert payload(result) == {
            "fixed": False,
            "image": "-1 2 3 -5 6 4",
            "input": "-2 1 3 -5 6 4",
            "tag": "psi-b",
        }

    def test_involute_colored(self, runner):
        result = run(runner, "involute", "5 6 2[3] 1[3] 4[1] 3[1]", "--tag", "phi", "--r", "4")
        assert payload(result)["fixed"] is True

    def test_outside_domain(self, runner):
        result = run(runner, "involute", "--tag", "eta", "--", "2 1 -3 -5 6 -4")
        assert result.exit_code == 2

    def test_fixed_points(self, runner):
        result = run(runner, "fixed-points", "--tag", "psi-b", "--n", "2")
        assert result.exit_code == 0, result.stderr
        assert set(result.stdout.splitlines()) == {"1 2", "-1 -2", "2 1", "-2 -1"}

    def test_restricted_phi_fixed_points(self, runner, restriction_file):
        path = restriction_file([[0, 1], [1], [0, 1, 2], [2]])
        result = run(runner, "fixed-points", "--tag", "phi", "--r", "3", "--n", "4", "--restriction", str(path))
        assert result.exit_code == 0, result.stderr
        assert len(result.stdout.splitlines()) == 8

    def test_restriction_only_for_phi(self, runner, restriction_file):
        path = restriction_file(["+", "+", "+"])
        result = run(runner, "fixed-points", "--tag", "theta", "--n", "3", "--restriction", str(path))
        assert result.exit_code == 2


class TestVerify:
    def test_equal_identity(self, runner):
        result = run(runner, "verify", "--id", "B-GF-length", "--n", "1")
        assert result.exit_code == 0, result.stderr
        data = payload(result)
        assert data["equal"] is True
        assert data["lhs_text"] == "1 − t"
        assert data["elapsed_ms"] is None

    def test_timings_flag(self, runner):
        result = run(runner, "verify", "--id", "macmahon", "--n", "2", "--timings")
        assert payload(result)["elapsed_ms"] is not None

    def test_restriction_file(self, runner, restriction_file):
        path = restriction_file(["±", "−", "+", "±", "±"])
        result = run(runner, "verify", "--id", "B-odd-absinv-refined", "--n", "2", "--restriction", str(path))
        assert result.exit_code == 0, result.stderr
        assert payload(result)["params"]["restriction"] == [[0, 1], [1], [0], [0, 1], [0, 1]]

    @pytest.mark.parametrize(
        "args",
        [
            ("--id", "G-main-even", "--n", "1"),
            ("--id", "G-main-even", "--r", "2", "--n", "1", "--b", "2"),
            ("--id", "no-such-identity", "--n", "1"),
            ("--id", "macmahon"),
        ],
    )
    def test_schema_errors(self, runner, args):
        result = run(runner, "verify", *args)
        assert result.exit_code == 2
        assert result.stdout == ""

    def test_unequal_sides_exit_one(self, runner, mocker):
        def tampered(params, jobs):
            return Sides(Poly.one(1, 2), Poly.zero(1, 2), 0)

        mocker.patch.dict(identity_registry._builders, {"macmahon": tampered})
        result = run(runner, "verify", "--id", "macmahon", "--n", "2")
        assert result.exit_code == 1
        assert payload(result)["equal"] is False

    def test_invariant_breach_exit_three(self, runner, mocker):
        mocker.patch.object(identity_registry, "verify", side_effect=InvariantBreach("partial sums disagree"))
        result = run(runner, "verify", "--id", "macmahon", "--n", "2")
        assert result.exit_code == 3
        assert "partial sums disagree" in result.stderr

    def test_left_family_count(self, runner):
        result = run(runner, "verify", "--id", "D-odd-length", "--n", "2")
        assert result.exit_code == 0, result.stderr
        data = payload(result)
        assert (data["elements"], data["lhs_elements"]) == (1944, 1920)

    def test_sides_over_different_rings_exit_three(self, runner, mocker):
        def mismatched(params, jobs):
            return Sides(Poly.one(1, 2), Poly.one(2, 2), 0)

        mocker.patch.dict(identity_registry._builders, {"macmahon": mismatched})
        result = run(runner, "verify", "--id", "macmahon", "--n", "2")
        assert result.exit_code == 3
        assert result.stdout == ""

    def test_worker_count_does_not_change_output(self, runner):
        serial = run(runner, "verify", "--id", "A-even", "--n", "2", "--jobs", "1")
        parallel = run(runner, "verify", "--id", "A-even", "--n", "2", "--jobs", "2")
        assert serial.exit_code == parallel.exit_code == 0
        assert serial.stdout == parallel.stdout

    def test_series_id_uses_configured_degree(self, runner, monkeypatch):
        monkeypatch.setattr(settings, "max_degree", 5)
        result = run(runner, "verify", "--id", "lin-nepo", "--n", "1")
        assert result.exit_code == 0, result.stderr
        assert payload(result)["params"]["max_degree"] == 5

    def test_identities(self, runner):
        result = run(runner, "identities")
        ids = [item["id"] for item in payload(result)]
        assert len(ids) == 40
        assert "gessel-simion" in ids


class TestSeries:
    def test_lin_nepo(self, runner):
        result = run(runner, "series", "--id", "lin-nepo", "--n", "1", "--max-degree", "4")
        assert result.exit_code == 0, result.stderr
        data = payload(result)
        assert data["rhs"] == [1, 0, 3, 0, 5]
        assert data["lhs"] == data["rhs"]

    def test_not_a_series(self, runner):
        assert run(runner, "series", "--id", "macmahon", "--n", "1").exit_code == 2


class TestSelftest:
    def test_failed_summary_exits_one(self, runner, mocker):
        summary = SelftestSummary(level="quick", passed=False, total=1, failed=["A-even {'n': 1}"], entries=[])
        run_mock = mocker.patch.object(selftest_service, "run", return_value=summary)
        result = run(runner, "selftest", "--seed", "7")
        assert result.exit_code == 1
        assert payload(result)["failed"] == ["A-even {'n': 1}"]
        assert run_mock.call_args.kwargs["seed"] == 7

    def test_passing_summary(self, runner, mocker):
        summary = SelftestSummary(level="quick", passed=True, total=0, failed=[], entries=[])
        mocker.patch.object(selftest_service, "run", return_value=summary)
        assert run(runner, "selftest").exit_code == 0


def test_help_lists_commands(runner):
    result = run(runner, "--help")
    assert result.exit_code == 0
    for command in ("stats", "enumerate", "involute", "fixed-points", "verify", "identities", "series", "selftest"):
        assert command in result.stdout
