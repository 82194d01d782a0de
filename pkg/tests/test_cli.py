import json

from coxm06.cli import main
from coxm06.lattice import parse_class


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_class_pairing(capsys):
    assert run(capsys, "class", "Q12.34", "pair", "C") == (0, "1\n", "")


def test_class_sum_round_trips(capsys):
    code, out, _ = run(capsys, "class", "L123 + E1")
    assert code == 0
    code2, out2, _ = run(capsys, "class", out.strip())
    assert out2 == out
    assert parse_class(out.strip()).d == 1


def test_class_parse_error(capsys):
    code, _, err = run(capsys, "class", "bad!")
    assert code == 2 and "error" in err


def test_certify_x_strictness(capsys):
    code, out, _ = run(capsys, "certify", "--x", "2;0,0,0,0;1,1,1,1,1,1")
    assert code == 1 and "(4) strictness" in out


def test_certify_s4(capsys):
    code, out, _ = run(capsys, "certify", "--s4", "5;3,3,2,1")
    assert code == 0
    assert out.splitlines()[0] == "Effective: (H-E1-E2) + 2*(H-E1-E3) + (H-E2-E4) + (H-E2)"
    code, out, _ = run(capsys, "certify", "--s4", "0;0,0,0,0", "--format", "records")
    rec = json.loads(out)
    assert code == 0 and rec["verdict"] == "Effective" and rec["terms"] == []


def test_certify_restrictions(capsys):
    assert run(capsys, "certify", "--d", "Q12.34")[0] == 1
    assert run(capsys, "certify", "--d", "H")[0] == 0


def test_restrict_and_h0(capsys):
    code, out, _ = run(capsys, "restrict", "Q12.34", "E5")
    assert code == 0 and out.strip() == "E5: 1;0,0,0,0"
    assert run(capsys, "h0", "Q12.34")[1] == "1\n"
    assert run(capsys, "h0", "1;0,0,0,0;1,1,0", "--surface", "Y7")[1] == "1\n"
    assert run(capsys, "h0", "1;0,0,0,0", "--surface", "P9")[0] == 2


def test_monomials(capsys):
    code, out, _ = run(capsys, "monomials", "Q12.34")
    assert code == 0 and out.splitlines() == ["Q12.34", "1 monomials"]


def test_lift_exact(capsys):
    code, out, _ = run(capsys, "lift", "Q12.34", "--exp", "cz=1", "--format", "records")
    rec = json.loads(out)
    assert code == 0 and rec["case"] == "CaseII"
    (sec,) = rec["sections"]
    assert sec["criterion"] and sec["moves"] == 0
    assert sec["terms"][0]["delta"] == "0;0,0,0,0;0,0,0,0,0,0"


def test_lift_trivial_section(capsys):
    code, out, _ = run(capsys, "lift", "H", "--exp", "")
    assert code == 0 and "CaseI" in out and "lifts" in out


def test_lift_rewrites(capsys):
    code, out, _ = run(capsys, "lift", "4;2,2,2,2,2;2,2,0,0,0,0,2,0,0,0",
                       "--exp", "a23=1,a24=1,l3=1,l4=1")
    assert code == 0 and "step 1" in out and "needs rewriting" in out


def test_lift_invalid_exponents(capsys):
    assert run(capsys, "lift", "Q12.34", "--exp", "cz=2")[0] == 1
    assert run(capsys, "lift", "Q12.34", "--exp", "q7=1")[0] == 2


def test_verify_single_generators(capsys, tmp_path):
    path = tmp_path / "out.jsonl"
    code, _, _ = run(capsys, "verify", "--max-total", "1", "--format", "records", "--out", str(path))
    lines = path.read_text().splitlines()
    assert code == 0 and len(lines) == 41
    summary = json.loads(lines[-1])
    assert summary["total"] == 40 and summary["failed"] == 0


def test_verify_empty_sweep(capsys):
    code, out, _ = run(capsys, "verify", "--max-total", "0")
    assert code == 0 and out.strip() == "verified 0 classes: 0 pass, 0 fail"


def test_verify_parallel_matches_serial(capsys):
    _, serial, _ = run(capsys, "verify", "--box", "1,1,0", "--format", "records")
    _, par, _ = run(capsys, "verify", "--box", "1,1,0", "--format", "records", "--jobs", "2")

    def strip(text):
        out = []
        for line in text.splitlines():
            rec = json.loads(line)
            rec.pop("seconds", None)
            out.append(rec)
        return out
    assert strip(serial) == strip(par)


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "verify", "--jobs", "0")[0] == 2
    assert run(capsys, "verify", "--box", "1,1")[0] == 2
    assert run(capsys, "class", "H", "--out", "/nonexistent/dir/x")[0] == 2
