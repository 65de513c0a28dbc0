import json

from hmvol.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_sp2z(capsys):
    code, out, _ = run(capsys, "analyze", "2*U + <-2>", "--group", "SO~+")
    assert code == 0
    assert "1/2880" in out
    assert "1/8640" in out


def test_analyze_json_schema(capsys):
    code, out, _ = run(capsys, "analyze", "2*U + <-2>", "--json", "--precision", "10")
    assert code == 0
    doc = json.loads(out)
    assert doc["lattice"]["rank"] == 5
    assert doc["lattice"]["det"] == "-2"
    assert doc["bad_primes"] == [2]
    assert doc["densities"][0]["value_num"] == "45"
    assert doc["densities"][0]["value_den"] == "1"
    assert doc["euler_product"]["pi_half_exp"] == 12
    assert doc["volumes"]["O~+"] == {"num": "1", "den": "2880"}
    assert doc["cusp_leading"]["SO~+"] == {"num": "1", "den": "8640"}
    assert isinstance(doc["indices"], dict)
    assert "numeric_echo" in doc
    # exact values never rendered as floats outside the echo
    assert isinstance(doc["volumes"]["O"]["num"], str)


def test_analyze_all_tags_for_ii(capsys):
    code, out, _ = run(capsys, "analyze", "2*U + 2*E8(-1)", "--json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc["volumes"]) == {"O", "O+", "SO+", "O~+", "SO~+"}
    assert doc["volumes"]["O+"] == doc["volumes"]["O~+"]


def test_analyze_parse_error_exit_2(capsys):
    code, _, err = run(capsys, "analyze", "2*U +")
    assert code == 2
    assert "offset" in err


def test_analyze_precondition_exit_3(capsys):
    code, _, err = run(capsys, "analyze", "U")
    assert code == 3


def test_analyze_definite_exit_3(capsys):
    code, _, err = run(capsys, "analyze", "<2> + <2> + <2>")
    assert code == 3


def test_oracle_guard_exit_4(capsys):
    code, _, err = run(capsys, "oracle", "2*U + 2*E8(-1)", "2", "1")
    assert code == 4


def test_oracle_match(capsys):
    code, out, _ = run(capsys, "oracle", "U", "3", "1")
    assert code == 0
    assert "formula alpha_3 = 2/3" in out
    assert "stable" in out


def test_oracle_convention_note(capsys):
    code, out, _ = run(capsys, "oracle", "<1> + <-1>", "2", "3")
    assert code == 0
    assert "mod 2^r" in out


def test_catalog_families(capsys):
    for family, extra in (("II", ()), ("N", ())):
        code, out, _ = run(capsys, "catalog", family, *extra)
        assert code == 0, out
        assert "MISMATCH" not in out


def test_catalog_subrange(capsys):
    code, out, _ = run(capsys, "catalog", "L", "--m", "0", "--d", "1..6")
    assert code == 0
    assert out.count("ok") == 6


def test_catalog_unknown_family(capsys):
    code, _, err = run(capsys, "catalog", "Z")
    assert code == 3


def test_analyze_oracle_check_flag(capsys):
    code, out, _ = run(capsys, "analyze", "<1> + <1> + <-1>", "--group", "O", "--oracle-check")
    assert code == 0
    assert "oracle check" in out and "match" in out


def test_catalog_mismatch_exits_nonzero(capsys, monkeypatch):
    import hmvol.families as fam

    monkeypatch.setattr(fam, "fixture_vol_l_tilde", lambda m, d: 0)
    code, out, _ = run(capsys, "catalog", "L", "--m", "0", "--d", "1,2")
    assert code == 1
    assert "MISMATCH" in out


def test_oracle_good_prime(capsys):
    code, out, _ = run(capsys, "oracle", "<1> + <-1>", "5", "1")
    assert code == 0
    assert "formula alpha_5 = 4/5" in out
    assert out.count("4/5") >= 3
    assert "stable" in out


def test_analyze_stable_tag_on_odd_lattice_exit_3(capsys):
    code, _, err = run(capsys, "analyze", "U + U + <-1>", "--group", "O~+")
    assert code == 3
    assert "even" in err
