import json
import re
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stochcoop import cli
from stochcoop import io as sio
from stochcoop.distributions import AlphaCutUniform, DiscreteUniform, Gamma, Normal, Uniform
from stochcoop.errors import InvalidParameters
from stochcoop.generators import random_newsvendor, random_normal_game, random_uniform_game, rng_for
from stochcoop.ssdcore import DRSignedType, DRType, RType, StochasticGame, Unstructured

DATA = Path(__file__).resolve().parent.parent / "data"


def run_cli(capsys, *argv):
    code = cli.run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return path


class TestRoundTrip:
    @pytest.mark.parametrize(
        "d",
        [Normal(1.25, 0.3), Uniform(-1, 2.5), Gamma(2, 0.1), DiscreteUniform((3, -1, 0.1)), AlphaCutUniform(-6, 10, 0.5)],
    )
    def test_distribution(self, d):
        obj = json.loads(sio.dumps(sio.distribution_to_dict(d)))
        assert sio.distribution_from_dict(obj) == d

    def test_random_games(self):
        rng = rng_for(2)
        for _ in range(20):
            n = int(rng.integers(1, 5))
            g = random_normal_game(rng, n) if rng.random() < 0.5 else random_uniform_game(rng, n)
            text = sio.dumps(sio.game_to_dict(g))
            back = sio.game_from_dict(json.loads(text))
            assert back == g
            assert sio.dumps(sio.game_to_dict(back)) == text

    def test_newsvendor(self):
        rng = rng_for(3)
        for _ in range(10):
            prob = random_newsvendor(rng, int(rng.integers(1, 4)))
            assert sio.newsvendor_from_dict(json.loads(sio.dumps(sio.newsvendor_to_dict(prob)))) == prob

    @pytest.mark.parametrize(
        "alloc",
        [
            RType([0.25, 0.75]),
            DRType([1.5, 1.5], [0.5, 0.5]),
            DRSignedType([2, -1], [1.5, -0.5]),
            Unstructured([1, 2], [[1, 0.5], [0.5, 2]]),
        ],
    )
    def test_allocations(self, alloc):
        back = sio.allocation_from_dict(json.loads(sio.dumps(sio.allocation_to_dict(alloc))))
        assert type(back) is type(alloc)
        assert sio.allocation_to_dict(back) == sio.allocation_to_dict(alloc)

    def test_derived(self):
        mean, lower = sio.derived_from_dict(sio.load_json(DATA / "three_player_derived.json"))
        assert mean[0b111] == 12 and lower[0b011] == 3
        assert sio.derived_to_dict(mean, lower) == sio.load_json(DATA / "three_player_derived.json")

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=6))
    def test_discrete_floats_exact(self, xs):
        d = DiscreteUniform(tuple(xs))
        assert sio.distribution_from_dict(json.loads(sio.dumps(sio.distribution_to_dict(d)))) == d


class TestDecodeErrors:
    def base(self):
        return sio.game_to_dict(StochasticGame.from_mapping(2, {1: Normal(1, 1), 2: Normal(1, 1), 3: Normal(3, 4)}))

    def test_unknown_key(self):
        obj = self.base()
        obj["coalitions"]["3"] = {"mu": 0, "sigma2": 1}
        with pytest.raises(InvalidParameters, match="'3'"):
            sio.game_from_dict(obj)

    def test_missing_key(self):
        obj = self.base()
        del obj["coalitions"]["1,2"]
        with pytest.raises(InvalidParameters, match="'1,2'"):
            sio.game_from_dict(obj)

    def test_duplicate_key(self):
        obj = self.base()
        obj["coalitions"]["2,1"] = obj["coalitions"]["1,2"]
        with pytest.raises(InvalidParameters, match="unknown coalition key '2,1'"):
            sio.game_from_dict(obj)

    def test_bad_parameter(self):
        obj = self.base()
        obj["coalitions"]["2"] = {"mu": 0, "sigma2": -1}
        with pytest.raises(InvalidParameters, match="'2'"):
            sio.game_from_dict(obj)

    def test_bad_family(self):
        obj = self.base()
        obj["family"] = "cauchy"
        with pytest.raises(InvalidParameters):
            sio.game_from_dict(obj)

    def test_malformed_file(self, tmp_path):
        with pytest.raises(InvalidParameters, match="malformed"):
            sio.load_json(write(tmp_path, "bad.json", "{not json"))
        with pytest.raises(InvalidParameters):
            sio.load_json(tmp_path / "missing.json")


class TestCliExamples:
    def test_three_player_empty(self, capsys):
        code, out, _ = run_cli(capsys, "game", "analyze", "--input", DATA / "three_player_derived.json", "--allocation-type", "dr")
        assert code == 0
        rep = json.loads(out)
        assert rep["result"]["verdict"] == "empty"
        assert rep["command"] == "game analyze" and rep["tolerance"] == 1e-9

    def test_three_player_modified(self, capsys):
        code, out, _ = run_cli(capsys, "game", "analyze", "--input", DATA / "three_player_derived_modified.json")
        assert code == 0 and json.loads(out)["result"]["verdict"] == "nonempty"

    def test_three_player_signed(self, capsys):
        code, out, _ = run_cli(capsys, "game", "analyze", "--input", DATA / "three_player_derived.json", "--allocation-type", "dr-signed")
        assert code == 0 and json.loads(out)["result"]["nonempty"] is True

    def test_two_vendors(self, capsys):
        code, out, _ = run_cli(capsys, "newsvendor", "analyze", "--input", DATA / "two_vendors.json")
        res = json.loads(out)["result"]
        assert code == 0 and res["feasible"] and res["direct_feasible"]
        assert all(5 / 12 - 1e-9 <= r <= 5 / 6 + 1e-9 for r in res["r"])
        assert res["r"] == pytest.approx([0.5, 0.5], abs=0.1)

    def test_no_pooling(self, capsys):
        code, out, _ = run_cli(capsys, "newsvendor", "analyze", "--input", DATA / "two_vendors_no_pooling.json")
        assert code == 0 and json.loads(out)["result"]["feasible"] is False
        code, _, _ = run_cli(capsys, "--fail-on-empty", "newsvendor", "analyze", "--input", DATA / "two_vendors_no_pooling.json")
        assert code == 1

    def test_one_player(self, capsys):
        for kind in ("r", "dr", "dr-signed"):
            code, out, _ = run_cli(capsys, "game", "analyze", "--input", DATA / "one_player.json", "--allocation-type", kind)
            assert code == 0 and json.loads(out)["result"]["verdict"] == "nonempty"

    def test_blocked_normal(self, capsys):
        code, out, _ = run_cli(capsys, "game", "analyze", "--input", DATA / "two_normal_blocked.json", "--fail-on-empty")
        assert code == 1 and json.loads(out)["result"]["verdict"] == "empty"

    def test_check_names_first_violation(self, capsys):
        code, out, _ = run_cli(
            capsys, "game", "check", "--input", DATA / "two_normal_blocked.json", "--allocation", DATA / "alloc_blocked.json"
        )
        res = json.loads(out)["result"]
        assert code == 0 and res["member"] is False
        assert res["first_violation"]["coalition"] == "1"
        assert res["first_violation"]["condition"] == "mean"

    def test_check_member(self, capsys, tmp_path):
        alloc = write(tmp_path, "a.json", {"type": "r", "r": [0.5, 0.5]})
        code, out, _ = run_cli(capsys, "game", "check", "--input", DATA / "two_uniform_pooled.json", "--allocation", alloc)
        assert code == 0 and json.loads(out)["result"]["member"] is True

    def test_ssd_compare_inline(self, capsys):
        code, out, _ = run_cli(
            capsys, "ssd", "compare", "--left", '{"family": "uniform", "a": 2, "b": 4}',
            "--right", '{"family": "uniform", "a": 0, "b": 4}', "--numeric",
        )
        res = json.loads(out)["result"]
        assert code == 0 and res["verdict"] == "left_dominates"
        assert res["numeric"]["left_over_right"]["verdict"] == "holds"

    def test_export_cdf(self, capsys):
        code, out, _ = run_cli(capsys, "newsvendor", "export-cdf", "--input", DATA / "two_vendors.json", "--coalition", "1,2", "--points", 10)
        lines = out.strip().splitlines()
        assert code == 0 and lines[0] == "x,F" and len(lines) == 12
        xs = [float(line.split(",")[0]) for line in lines[1:]]
        assert xs[0] == pytest.approx(-6.8) and xs[-1] == pytest.approx(10.8)

    def test_selftest(self, capsys):
        code, out, _ = run_cli(capsys, "selftest")
        assert code == 0 and json.loads(out)["result"]["passed"] is True
        code, out, _ = run_cli(capsys, "selftest", "--output", "text")
        assert code == 0 and out.strip().endswith("9/9 passed")

    def test_report_file(self, capsys, tmp_path):
        dest = tmp_path / "rep.json"
        code, out, _ = run_cli(capsys, "game", "analyze", "--input", DATA / "two_uniform_pooled.json", "--report", dest)
        assert code == 0 and dest.read_text().strip() == out.strip()


class TestExitCodes:
    def test_malformed_json(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "game", "analyze", "--input", write(tmp_path, "g.json", "{oops"))
        assert code == 2 and "malformed" in err

    def test_unknown_key_named(self, capsys, tmp_path):
        obj = sio.load_json(DATA / "two_vendors.json")
        obj["demand"]["1,3"] = {"a": 0, "b": 1}
        code, _, err = run_cli(capsys, "newsvendor", "analyze", "--input", write(tmp_path, "p.json", obj))
        assert code == 2 and "'1,3'" in err

    def test_missing_key_named(self, capsys, tmp_path):
        obj = sio.load_json(DATA / "two_uniform_pooled.json")
        del obj["coalitions"]["2"]
        code, _, err = run_cli(capsys, "game", "analyze", "--input", write(tmp_path, "g.json", obj))
        assert code == 2 and "'2'" in err

    def test_invariant_violation(self, capsys, tmp_path):
        obj = sio.load_json(DATA / "two_vendors.json")
        obj["c"] = 3
        code, _, err = run_cli(capsys, "newsvendor", "analyze", "--input", write(tmp_path, "p.json", obj))
        assert code == 2 and err

    def test_usage_errors(self, capsys):
        assert run_cli(capsys, "game")[0] == 2
        assert run_cli(capsys, "bogus")[0] == 2
        assert run_cli(capsys, "--tolerance", "0", "selftest")[0] == 2

    def test_incompatible_allocation(self, capsys, tmp_path):
        g = sio.game_to_dict(StochasticGame.from_mapping(1, {1: Gamma(1, 1)}))
        alloc = write(tmp_path, "a.json", {"type": "dr", "d": [1], "r": [1]})
        code, _, _ = run_cli(capsys, "game", "check", "--input", write(tmp_path, "g.json", g), "--allocation", alloc)
        assert code == 2


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ["game", "analyze", "--input", DATA / "two_uniform_pooled.json"],
            ["game", "analyze", "--input", DATA / "three_player_derived_modified.json"],
            ["newsvendor", "analyze", "--input", DATA / "two_vendors.json"],
            ["selftest", "--seed", "4"],
        ],
    )
    def test_byte_identical(self, capsys, argv):
        first = run_cli(capsys, *argv)[1]
        second = run_cli(capsys, *argv)[1]
        assert first == second and first

    def test_flags_before_or_after(self, capsys):
        a = run_cli(capsys, "--tolerance", "1e-7", "game", "analyze", "--input", DATA / "one_player.json")[1]
        b = run_cli(capsys, "game", "analyze", "--input", DATA / "one_player.json", "--tolerance", "1e-7")[1]
        assert a == b and json.loads(a)["tolerance"] == 1e-7


NUMBER = re.compile(r"-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?")
QUOTED = re.compile(r'"[^"]*"')


def _numbers_from_json(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return []
    if isinstance(obj, (int, float)):
        return [float(obj)]
    if isinstance(obj, dict):
        return [x for v in obj.values() for x in _numbers_from_json(v)]
    return [x for v in obj for x in _numbers_from_json(v)]


def _numbers_from_text(lines):
    out = []
    for line in lines:
        # keys may be coalition labels such as 1,2; only values count
        value = line.split(": ", 1)[1] if ": " in line else ""
        out.extend(float(m) for m in NUMBER.findall(QUOTED.sub("", value)))
    return out


@pytest.mark.parametrize(
    "argv",
    [
        ["game", "analyze", "--input", DATA / "two_uniform_pooled.json"],
        ["game", "analyze", "--input", DATA / "two_normal_blocked.json", "--allocation-type", "r"],
        ["game", "check", "--input", DATA / "two_normal_blocked.json", "--allocation", DATA / "alloc_blocked.json"],
        ["newsvendor", "analyze", "--input", DATA / "two_vendors.json"],
        ["ssd", "compare", "--left", '{"family": "normal", "mu": 1, "sigma2": 2}', "--right", '{"family": "normal", "mu": 0.5, "sigma2": 3}'],
    ],
)
def test_text_and_json_share_numbers(capsys, argv):
    as_json = json.loads(run_cli(capsys, *argv, "--output", "json")[1])
    lines = run_cli(capsys, *argv, "--output", "text")[1].splitlines()
    cut = next((i for i, line in enumerate(lines) if line.startswith("coalition ")), len(lines))
    assert sorted(_numbers_from_text(lines[:cut])) == sorted(_numbers_from_json(as_json))
    if cut < len(lines):
        rows = [line.split() for line in lines[cut + 2:]]
        expected = [
            [row["coalition"], row["protection"], row["market_quality"]]
            for row in as_json["result"]["coalitions"]
        ]
        assert [[r[0], float(r[1]), float(r[2])] for r in rows] == expected
