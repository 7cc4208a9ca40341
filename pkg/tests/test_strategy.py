import numpy as np

from lsgame import (
    Correlation,
    build_full_test,
    build_ideal_strategy,
    build_representation,
    generate_correlation,
    ideal_table_values,
    make_params,
    table_deviation,
)
from lsgame.strategy import alice_observable, bob_observable, eq_label, var_label


def ideal_setup(d, r=None):
    p = make_params(d, r)
    rep = build_representation(p)
    test = build_full_test(p)
    return p, rep, test, build_ideal_strategy(p, rep, test)


def test_support_structure():
    p = make_params(3)
    test = build_full_test(p)
    ls_pairs = [xy for xy in test.support if xy[0].startswith("I")]
    ext_pairs = [xy for xy in test.support if xy[0] in test.ext_questions and xy[1] in test.ext_questions]
    comm_pairs = [xy for xy in test.support if xy[1].startswith("comm:")]
    assert len(ls_pairs) == 3 * 90
    assert len(ext_pairs) == 25
    assert len(comm_pairs) == 16
    assert len(test.support) == len(ls_pairs) + 25 + 16
    assert len(set(test.support)) == len(test.support)
    assert abs(test.pi * len(test.support) - 1) < 1e-15
    assert test.quoted_support == 157 * 2 + 726


def test_disjoint_blocks():
    p = make_params(3)
    test = build_full_test(p)
    # an equation question never pairs with a commutation double question
    for x, y in test.support:
        if x.startswith("I"):
            assert y.startswith("x(")
        if y.startswith("comm:"):
            assert not x.startswith("I")


def test_answer_alphabets():
    p = make_params(5)
    test = build_full_test(p)
    n = test.n_vars
    assert n == 107
    assert test.alice_answers["ext:0"] == (0, 2)
    assert test.alice_answers[var_label("a1")] == (0, 1)
    assert test.alice_answers[f"ext:{n + 1}"] == (0, 1, 2)
    assert test.bob_answers[f"comm:{n + 1},f0"] == tuple(
        (b1, b2) for b1 in (0, 1, 2) for b2 in (0, 1)
    )
    assert len(test.alice_answers[eq_label(0)]) == 8


def test_state_normalized():
    for d in (3, 5, 7):
        _, _, _, strat = ideal_setup(d)
        assert abs(np.linalg.norm(strat.state) - 1) < 1e-12


def test_measurement_families_complete():
    _, _, test, strat = ideal_setup(3)
    for party, fams in (("alice", strat.alice), ("bob", strat.bob)):
        for q, fam in fams.items():
            total = sum(fam)
            np.testing.assert_allclose(total, np.eye(total.shape[0]), atol=1e-10, err_msg=f"{party} {q}")
            for i, pi in enumerate(fam):
                for j, pj in enumerate(fam):
                    want = pi if i == j else np.zeros_like(pi)
                    np.testing.assert_allclose(pi @ pj, want, atol=1e-10)


def test_observable_agreement_on_state():
    # M(s) N(s) |psi> = |psi> for every variable
    _, _, test, strat = ideal_setup(5)
    s = strat.state_matrix()
    for gen in test.game.system.variables:
        m = alice_observable(strat, gen)
        n = bob_observable(strat, gen)
        assert np.linalg.norm(m @ s @ n.T - s) <= 1e-10, gen


def test_equation_observable_matches_representation():
    p, rep, test, strat = ideal_setup(3)
    # a3 has no standalone question for Alice; the equation-derived
    # observable must reproduce the representation image
    np.testing.assert_allclose(alice_observable(strat, "a3"), rep["a3"], atol=1e-12)


def test_outcome2_projectors_vanish_at_d3():
    _, _, test, strat = ideal_setup(3)
    for q in (test.ext_z, test.ext_x, test.ext_sub):
        fam = strat.alice[q]
        assert np.linalg.norm(fam[-1]) <= 1e-12


def test_correlation_is_probability():
    _, _, test, strat = ideal_setup(3)
    corr = generate_correlation(strat, test)
    assert set(corr.entries) == set(test.support)
    for table in corr.entries.values():
        assert table.min() >= -1e-12
        assert abs(table.sum() - 1) <= 1e-10


def test_correlation_table_examples():
    p, _, test, strat = ideal_setup(3)
    corr = generate_correlation(strat, test)
    d = 3
    # cos^2(pi/2d)/(d-1) = cos^2(pi/6)/2 = 0.375
    t1 = corr.entries[(test.ext_z, var_label("a1"))]
    assert abs(t1[0, 0] - 0.375) < 1e-12
    t2 = corr.entries[(test.ext_sub, test.ext_sub)]
    assert abs(t2[0, 0] - 2 / (d - 1)) < 1e-12
    t3 = corr.entries[(test.ext_z, f"comm:{test.n_vars + 1},f0")]
    assert abs(t3[0, 0] - 1 / (2 * d - 2)) < 1e-12


def test_tables_match_reference():
    for d in (3, 5):
        p, _, test, strat = ideal_setup(d)
        corr = generate_correlation(strat, test)
        assert table_deviation(corr, ideal_table_values(p, test)) <= 1e-10


def test_degenerate_entries_at_d3():
    p, _, test, strat = ideal_setup(3)
    ref = ideal_table_values(p, test)
    assert ref[(test.ext_z, test.ext_z)][(2, 2)] == 0.0
    corr = generate_correlation(strat, test)
    assert abs(corr.entries[(test.ext_z, test.ext_z)][2, 2]) <= 1e-12


def test_ext_role_flip_symmetry():
    _, _, test, strat = ideal_setup(5)
    corr = generate_correlation(strat, test)
    for q in (test.ext_z, test.ext_x):
        for v in (var_label("a1"), var_label("a2")):
            left = corr.entries[(q, v)]
            right = corr.entries[(v, q)]
            np.testing.assert_allclose(left, right.T, atol=1e-10)


def test_correlation_json_round_trip():
    _, _, test, strat = ideal_setup(3)
    corr = generate_correlation(strat, test)
    back = Correlation.from_json(corr.to_json())
    assert back.d == corr.d and back.r == corr.r
    assert set(back.entries) == set(corr.entries)
    for key, table in corr.entries.items():
        np.testing.assert_allclose(back.entries[key], table, atol=0)


def test_rep_params_mismatch_rejected():
    import pytest

    from lsgame import StructuralError

    p3 = make_params(3)
    p5 = make_params(5)
    rep5 = build_representation(p5)
    with pytest.raises(StructuralError):
        build_ideal_strategy(p3, rep5)


def test_json_deterministic():
    _, _, test, strat = ideal_setup(3)
    a = generate_correlation(strat, test).to_json()
    b = generate_correlation(strat, test).to_json()
    assert a == b
