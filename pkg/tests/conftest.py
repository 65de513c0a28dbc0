import pytest

from hmvol.expr import lattice_from_text

# Rank <= 2 corpus for the counting-oracle suite: consecutive-depth
# stabilization for rank-3 lattices at p = 2 needs depth 4, whose naive
# candidate count 2^36 exceeds the 2^30 guard, so the corpus stays at rank 2
# (rank-3 checks run against the internal counter in test_density instead).
ORACLE_CORPUS = (
    "U",                # even unimodular, hyperbolic
    "gram[2,1;1,2]",    # even unimodular, non-hyperbolic (chi = -1)
    "<1>",              # odd unimodular
    "<1> + <1>",        # odd pair with the mod-4 exception
    "<1> + <-1>",       # odd pair without the exception
    "<1> + <2>",        # odd blocks at adjacent levels
    "<1> + <-4>",       # odd blocks separated by a trivial level
    "<2> + <-8>",       # scaled version of the separated configuration
    "U(3)",             # p-scaled even block at p = 3
    "<3> + <-3>",       # odd p-scaled diagonal at p = 3
    "<1> + <5>",        # exception pair, also 5-adic content
    "<2> + <-10>",      # scaled odd pair, also 5-adic content
)


@pytest.fixture(scope="session")
def oracle_corpus():
    return [(text, lattice_from_text(text)) for text in ORACLE_CORPUS]


# Signature (2, n) lattices used for the structural volume invariants.
SIGNATURE_2N_EXPRESSIONS = (
    "2*U",
    "2*U + E8(-1)",
    "2*U + 2*E8(-1)",
    "U + U(2)",
    "U + U(2) + E8(-1)",
    "U + U(2) + 2*E8(-1)",
    "2*U + <-2>",
    "2*U + <-6>",
    "2*U + <-24>",
    "2*U + E8(-1) + <-10>",
    "U + <2> + <-2>",
    "U + <2> + <-8>",
    "U + <2> + <-24>",
    "U + E8(-1) + <2> + <-14>",
    "U + gram[2,1;1,-2]",
    "U + gram[2,1;1,-6]",
    "2*U + gram[-2,-1;-1,-2]",
)


@pytest.fixture(scope="session")
def signature_2n_corpus():
    return [(text, lattice_from_text(text)) for text in SIGNATURE_2N_EXPRESSIONS]
