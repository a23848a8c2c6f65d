from entmre.verify import PROPERTIES, run_properties

FAST = [
    "pauli-roundtrip",
    "purity-identity",
    "lemma-two",
    "xi-concurrence",
    "pure-identity",
    "relative-matrix",
    "lemma-one",
    "klein",
    "determinant-identity",
    "lemma-five",
    "branch-probabilities",
    "bell-closed",
    "departure-closed",
]


def test_fast_properties_pass_with_reduced_samples():
    results = run_properties(names=FAST, seed=0, samples=40)
    for r in results:
        assert r.passed, f"{r.name}: max residual {r.max_residual} > {r.tolerance}"


def test_remaining_cheap_properties():
    names = ["joint-convexity", "entropy-monotone", "hjw-reconstruction",
             "lemma-four", "lemma-six", "theorem-two", "theorem-four"]
    results = run_properties(names=names, seed=0, samples=20)
    for r in results:
        assert r.passed, f"{r.name}: max residual {r.max_residual} > {r.tolerance}"


def test_heavy_properties_small_budget():
    results = run_properties(
        names=["separable-mre", "theorem-five", "bound-chain"], seed=0, samples=1
    )
    for r in results:
        assert r.passed, f"{r.name}: max residual {r.max_residual} > {r.tolerance}"


def test_results_are_reproducible():
    a = run_properties(names=["lemma-two"], seed=5, samples=50)[0]
    b = run_properties(names=["lemma-two"], seed=5, samples=50)[0]
    assert a.max_residual == b.max_residual
    assert a.worst_sample == b.worst_sample


def test_every_registered_property_has_defaults():
    for name, (runner, samples, tol) in PROPERTIES.items():
        assert callable(runner)
        assert samples >= 1
        assert tol > 0
