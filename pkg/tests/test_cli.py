import io
import json
import subprocess
import sys

import pytest

from logeuler.cli import parse_cycle, run
from logeuler.chow import Space
from logeuler.errors import InputError
from logeuler.sscycle import CountReport


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--json")
    return code, json.loads(out)


WORKED = ("euler", "--space", "p2", "--divisor", "toric", "--cycle", "conormal:y - x*(1-x)", "--f", "X/Y")


class TestEuler:
    def test_worked_example(self):
        code, out, _ = call(*WORKED)
        assert code == 0
        assert "total 1" in out
        assert "(x,y;eta_x,eta_y) = (0,0;1,-1)" in out

    def test_json_schema_and_roundtrip(self):
        code, data = call_json(*WORKED)
        assert code == 0 and data["schema"] == 1 and data["total"] == 1
        assert set(data) >= {"total", "components", "warnings"}
        for comp in data["components"]:
            assert set(comp) >= {"label", "n_v", "strata"}
            for st in comp["strata"]:
                assert set(st) >= {"chart", "stratum", "count"}
        back = CountReport.from_dict(data)
        assert back.total == data["total"]
        assert [c.degree for c in back.components] == [c["degree"] for c in data["components"]]

    def test_deterministic(self):
        assert call(*WORKED) == call(*WORKED)

    @pytest.mark.parametrize("space,div,f", [("p1", "0,inf", "x"), ("p1", "0,inf,1", "x/(x-1)"),
                                             ("p1", "0,inf,1,2", "x/(x-2)"), ("p2", "toric", "X/Y"),
                                             ("p1xp1", "toric", "x*y")])
    def test_zero_section_matches_chern(self, space, div, f):
        code, e = call_json("euler", "--space", space, "--divisor", div, "--f", f)
        code2, c = call_json("chern", "--space", space, "--divisor", div)
        assert code == 0 and code2 == 0
        assert e["total"] == (-1) ** c["dim"] * c["euler_open"]

    def test_scale_and_rotation_flags(self):
        base = call_json(*WORKED)[1]["total"]
        assert call_json(*WORKED, "--scale", "2")[1]["total"] == base
        assert call_json(*WORKED, "--rotation", "1")[1]["total"] == base

    def test_multiple_cycles(self):
        code, d = call_json("count", "--space", "p2", "--cycle", "conormal:y - x*(1-x);2",
                            "--cycle", "raw:Z:eta_x,eta_y", "--f", "X/Y")
        assert code == 0 and d["total"] == 2


class TestChern:
    def test_toric(self):
        code, out, _ = call("chern", "--space", "p2", "--divisor", "toric")
        assert code == 0
        assert "c(Omega^1(log D)) = 1\n" in out and "chi(U) = 0" in out


class TestDrstalk:
    def test_j_shriek(self):
        code, d = call_json("drstalk", "--k", "1", "--lambda", "0", "--shift", "-1")
        assert code == 0
        assert all(v == 0 for v in d["dims"].values())
        assert d["verdict"] == "j_! stalk"

    def test_rj_star(self):
        code, d = call_json("drstalk", "--k", "2", "--lambda", "0", "--shift", "0")
        assert d["dims"] == {"-2": 1, "-1": 2, "0": 1} and d["verdict"] == "Rj_* stalk"

    def test_bad_lambda(self):
        assert call("drstalk", "--lambda", "1/2")[0] == 2


class TestBcheck:
    def test_identities(self):
        assert call_json("bcheck", "--w", "2", "--b", "(s+2)*(s+1)", "--P", "d^2")[1]["valid"] is True
        assert call_json("bcheck", "--w", "1", "--b", "s", "--P", "d")[1]["valid"] is False
        assert call_json("bcheck", "--w", "3")[1]["valid"] is True

    def test_generation(self):
        assert call_json("bcheck", "--gen", "star", "--v", "0")[1]["result"] is False
        assert call_json("bcheck", "--gen", "shriekstar", "--v", "2")[1]["result"] is True

    def test_budget_exit_code(self):
        code, d = call_json("bcheck", "--gen", "star", "--v", "30", "--depth", "10")
        assert code == 4 and d["error"]["category"] == "resource"

    def test_malformed_word(self):
        assert call("bcheck", "--w", "1", "--b", "s+1", "--P", "q")[0] == 2


class TestSharp:
    def test_worked_example(self):
        code, d = call_json("sharp", "--space", "p2", "--cycle", "conormal:y - x*(1-x)", "--f", "X/Y", "--s", "1")
        assert code == 0 and d["count_with_zero_section"] == 1

    def test_zero_fiber(self):
        code, d = call_json("sharp", "--space", "p2", "--f", "X/Y", "--s", "0")
        assert code == 0
        z = [c for c in d["charts"] if c["chart"] == "Z"][0]["components"][0]
        assert z["fiber"] == ["eta_x", "eta_y"]


class TestErrors:
    def test_input_errors(self):
        assert call("euler", "--space", "p2", "--f", "X + Y")[0] == 2
        assert call("euler", "--space", "q7", "--f", "X/Y")[0] == 2
        assert call("euler", "--space", "p2", "--cycle", "bogus", "--f", "X/Y")[0] == 2
        assert call("euler", "--space", "p2", "--cycle", "conormal:y - (x", "--f", "X/Y")[0] == 2
        assert call("nonsense")[0] == 2

    def test_non_transverse(self):
        code, d = call_json("euler", "--space", "p2", "--cycle", "conormal:x - y", "--f", "X/Y")
        assert code == 3 and d["error"]["category"] == "non_transverse"

    def test_resource(self):
        code, _, err = call(*WORKED, "--budget", "3")
        assert code == 4 and "resource" in err

    def test_stderr_diagnostic(self):
        code, out, err = call("euler", "--space", "p2", "--f", "X + Y")
        assert err.startswith("error [input]:")


def test_parse_cycle_multiplicity():
    X = Space.parse("p2", "toric")
    assert parse_cycle(X, "zero;-3").components[0].multiplicity == -3
    with pytest.raises(InputError):
        parse_cycle(X, "zero;x")
    with pytest.raises(InputError):
        parse_cycle(X, "raw:Z")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "logeuler.cli", "chern", "--space", "p1", "--divisor", "0,inf,1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "chi(U) = -1" in proc.stdout
