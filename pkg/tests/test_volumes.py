from fractions import Fraction

import pytest

from hmvol.discforms import finite_isometry_order, discriminant_form, num_prime_divisors
from hmvol.errors import PreconditionError
from hmvol.expr import lattice_from_text
from hmvol.families import (
    fixture_ratio_t_over_ii,
    fixture_vol_ii_oplus,
    fixture_vol_k_tilde,
    fixture_vol_l_tilde,
    k_lattice,
    l_lattice,
    t_lattice,
    unimodular_ii,
)
from hmvol.special_values import SymbolicReal, l_closed, zeta_closed
from hmvol.volumes import (
    build_report,
    cusp_dim_leading,
    euler_alpha_product,
    genus_discriminant,
    group_volume,
    siegel_gamma,
    siegel_identities,
    vol_hm,
    vol_s_so,
)


def test_euler_product_l_family_closed_form():
    # zeta(2)...zeta(8m+4) (2d)^-1 2^(-rho(d)-8m-5) prod_{p|d}(1+p^-(4m+2))
    for m in (0, 2):
        for d in range(1, 11):
            expected = SymbolicReal(Fraction(1))
            for i in range(1, 4 * m + 3):
                expected = expected * zeta_closed(2 * i)
            tail = Fraction(1, 2 * d) * Fraction(1, 2 ** (num_prime_divisors(d) + 8 * m + 5))
            for p in set(
                q for q in range(2, d + 1) if d % q == 0 and all(q % r for r in range(2, q))
            ):
                tail *= 1 + Fraction(1, p ** (4 * m + 2))
            assert euler_alpha_product(l_lattice(m, d)) == expected * tail, (m, d)


def test_euler_product_k_family_closed_form():
    # two-adic case constant * d^-1 * zeta(2)...zeta(8m+2) * L(4m+2, (4d|.))
    # for m = 0 and small d
    from hmvol.special_values import euler_factor, fundamental_discriminant

    m = 0
    for d in (1, 2, 3, 5):
        rho_d = num_prime_divisors(d)
        if d % 4 in (1, 2):
            a2 = Fraction(1, 2 ** (rho_d + 8 * m + 6))
        else:
            a2 = Fraction(1, 2 ** (rho_d + 8 * m + 7))
        disc, _ = fundamental_discriminant(4 * d)
        imprimitive = l_closed(4 * m + 2, disc)
        for p in sorted(set(int(q) for q in (2,)) | set(q for q in (3, 5, 7) if d % q == 0)):
            imprimitive = imprimitive * euler_factor(disc, p, 4 * m + 2)
        expected = SymbolicReal(a2 / d) * zeta_closed(2) * imprimitive
        assert euler_alpha_product(k_lattice(m, d)) == expected, d


def test_euler_product_unimodular():
    # II family: pure zeta tail with the 2-adic correction
    lat = unimodular_ii(1)
    got = euler_alpha_product(lat)
    expected = SymbolicReal(Fraction(1, 2**12))
    for i in range(1, 6):
        expected = expected * zeta_closed(2 * i)
    expected = expected * zeta_closed(6)
    assert got == expected


def test_vol_hm_unimodular_family():
    for m in (0, 1, 2):
        assert 2 * vol_hm(unimodular_ii(m)).rational() == fixture_vol_ii_oplus(m)


def test_vol_hm_rejects_small_or_definite():
    with pytest.raises(PreconditionError, match="rank"):
        vol_hm(lattice_from_text("U"))
    with pytest.raises(PreconditionError, match="indefinite"):
        vol_hm(lattice_from_text("<2> + <2> + <2>"))


def test_vol_hm_rejects_odd_parity_even_rank():
    # signature (3,1): det < 0, the L-value has no elementary closed form
    lat = lattice_from_text("<1> + <1> + <1> + <-2>")
    with pytest.raises(PreconditionError, match="closed"):
        vol_hm(lat)


def test_vol_hm_odd_lattice_signature_2n():
    # odd lattices are fine as long as the parity constraint holds
    lat = lattice_from_text("<1> + <1> + <-1> + <-3>")  # det 3 > 0, rank 4
    assert vol_hm(lat).is_rational


def test_spinor_genus_parameter_threads_through():
    lat = l_lattice(0, 1)
    assert vol_hm(lat, 2) == vol_hm(lat) / 2
    assert group_volume(lat, "O~+", 4) == group_volume(lat, "O~+") / 4


def test_sp2z_anchor():
    lat = l_lattice(0, 1)
    assert group_volume(lat, "SO~+") == Fraction(1, 2880)
    assert group_volume(lat, "O~+") == Fraction(1, 2880)
    assert cusp_dim_leading(lat, "SO~+") == Fraction(1, 8640)


def test_l_family_tilde_volumes():
    for m in (0, 2):
        for d in (1, 2, 3, 5, 10):
            assert group_volume(l_lattice(m, d), "O~+") == fixture_vol_l_tilde(m, d)


def test_paramodular_volume_and_growth():
    for d in (2, 3, 5):
        vol = group_volume(l_lattice(0, d), "SO~+")
        expected = (
            Fraction(1, 2**4)
            * d**2
            * prod_over_primes(d, 2)
            * abs(Fraction(1, 6) * Fraction(-1, 30))
        )
        assert vol == expected
        assert cusp_dim_leading(l_lattice(0, d), "SO~+") == Fraction(d * d + 1, 8640)


def prod_over_primes(d: int, exponent: int) -> Fraction:
    out = Fraction(1)
    for p in range(2, d + 1):
        if d % p == 0 and all(p % q for q in range(2, p)):
            out *= 1 + Fraction(1, p**exponent)
    return out


def test_ratio_t_over_ii():
    for m in (1, 2, 3):
        ratio = group_volume(t_lattice(m), "O~+") / group_volume(unimodular_ii(m), "O~+")
        assert ratio == fixture_ratio_t_over_ii(m)


def test_doubling_o_plus(signature_2n_corpus):
    for text, lat in signature_2n_corpus:
        assert group_volume(lat, "O+") == 2 * vol_hm(lat).rational(), text


def test_pi_cancellation(signature_2n_corpus):
    for text, lat in signature_2n_corpus:
        v = vol_hm(lat)
        assert v.is_rational, text
        assert v.coefficient > 0, text


def test_siegel_identities_gamma_values():
    assert siegel_gamma(1) == SymbolicReal(Fraction(1))
    assert vol_s_so(2) == SymbolicReal(Fraction(2), 2)  # 2 pi


def test_siegel_ratio_identity(signature_2n_corpus):
    for text, lat in signature_2n_corpus:
        ids = siegel_identities(lat)
        assert ids.ratio == vol_hm(lat), text
        # the compact-dual volume is 2 gamma_{r+s} / (gamma_r gamma_s)
        r, s = lat.signature
        assert ids.vol_s_dual == SymbolicReal(Fraction(2)) * siegel_gamma(r + s) / (
            siegel_gamma(r) * siegel_gamma(s)
        )


def test_siegel_ratio_on_ii_2_10():
    ids = siegel_identities(unimodular_ii(1))
    assert ids.ratio == vol_hm(unimodular_ii(1))


def test_stable_vs_plus_factor():
    # on L(2, 6): [PO : PO~+] = N = |O(q)| = 4 and [PO : PO+] = 2
    lat = l_lattice(2, 6)
    n_iso = finite_isometry_order(discriminant_form(lat))
    assert n_iso == 4
    assert group_volume(lat, "O~+") / group_volume(lat, "O+") == Fraction(n_iso, 2)


def test_k3_cusp_leading():
    from hmvol.families import fixture_cusp_k3

    for d in (2, 3, 4):
        assert cusp_dim_leading(l_lattice(2, d), "O~+") == fixture_cusp_k3(d)


def test_k_family_volume_examples():
    # frozen values, hand-derived through the unreduced chain
    assert group_volume(k_lattice(0, 5), "O~+") == Fraction(1, 12)
    assert group_volume(k_lattice(0, 3), "O~+") == Fraction(1, 24)
    assert group_volume(k_lattice(0, 12), "O~+") == Fraction(1, 3)
    assert group_volume(k_lattice(0, 5), "O~+") == fixture_vol_k_tilde(0, 5)


def test_genus_discriminant():
    assert genus_discriminant(k_lattice(0, 5)) == 5  # det 20 = 5 * 2^2
    assert genus_discriminant(unimodular_ii(1)) == 1
    assert genus_discriminant(lattice_from_text("U + gram[2,1;1,-2]")) == 5


def test_build_report_defaults():
    rep = build_report(l_lattice(0, 1))
    assert set(rep.volumes) == {"O", "O+", "SO+", "O~+", "SO~+"}
    assert rep.volumes["O~+"] == Fraction(1, 2880)
    assert rep.cusp_leading["SO~+"] == Fraction(1, 8640)
    assert rep.g_justified
    # II_{2,18}: stable group equals the plus group
    rep = build_report(lattice_from_text("2*U + 2*E8(-1)"))
    assert rep.volumes["O+"] == rep.volumes["O~+"]
    assert rep.indices["O+"] == rep.indices["O~+"] == 2


def test_build_report_oracle_check():
    # rank 3 at p = 2 cannot confirm stabilization inside the guard, so the
    # check reports the deepest feasible depth as guard-capped
    rep = build_report(lattice_from_text("<1> + <1> + <-1>"), oracle_check=True)
    assert rep.oracle_checks
    check = rep.oracle_checks[0]
    assert check["p"] == 2 and not check["stable"] and check["matches_formula"]
    rep2 = build_report(lattice_from_text("2*U + <-2>"), oracle_check=True)
    assert any("skipped" in line for line in rep2.assumptions)


def test_report_flags_unjustified_default():
    lat = lattice_from_text("gram[0,1;1,0] + gram[0,1;1,0] + <-2>")
    rep = build_report(lat, tags=("O",))
    assert not rep.g_justified
    assert any("assumed" in line for line in rep.assumptions)
