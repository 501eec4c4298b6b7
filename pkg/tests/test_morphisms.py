import random

import pytest
from hypothesis import given, settings, strategies as st

from twosorted.generate import random_structure
from twosorted.morphisms import (Corpus, PartialMap, check_approx_f_elementary, check_f_elementary,
                                 check_partial_f_embedding, check_approx_transfer, generate_corpus, load_map,
                                 tarski_vaught_check)
from twosorted.structures import StructureError, load_structure
from twosorted.syntax import FormulaError, parse_formula

M = load_structure("[sig]\nfunS g/1\n[domain]\na b\n[funS g]\na->1/4 b->3/4\n")
MA = M.restrict(["a"])


def one(value):
    return load_structure(f"[sig]\nfunS g/1\n[domain]\na\n[funS g]\na->{value}\n")


def corpus(*texts, sig=M.signature):
    return Corpus([parse_formula(t, sig) for t in texts])


POINT = corpus("(in ((g x)) (point 1/4))")


class TestPartialMap:
    def test_checks_domain(self):
        with pytest.raises(StructureError):
            PartialMap(M, M, {"z": "a"})
        with pytest.raises(StructureError):
            PartialMap(M, M, {"a": "z"})

    def test_checks_signature(self):
        other = load_structure("[sig]\nfunS h/1\n[domain]\na\n[funS h]\na->0\n")
        with pytest.raises(StructureError):
            PartialMap(M, other, {"a": "a"})

    def test_corpus_rejects_general(self):
        with pytest.raises(FormulaError):
            corpus("(not (in ((g x)) (point 0)))")


class TestElementary:
    def test_identity(self):
        assert check_f_elementary(PartialMap.identity(M), generate_corpus([M], 3)).ok

    def test_value_mismatch(self):
        r = check_f_elementary(PartialMap(M, M, {"a": "b"}), POINT)
        assert r.status == "fail"
        assert r.counterexamples[0].args == ("a",)

    def test_agreeing_target(self):
        assert check_f_elementary(PartialMap(MA, one("1/4"), {"a": "a"}), generate_corpus([MA], 3)).ok

    def test_identification_detected(self):
        r = check_f_elementary(PartialMap(M, one("1/4"), {"a": "a", "b": "a"}), corpus("(not (= x y))"))
        assert r.status == "fail"

    def test_report_lines_deterministic(self):
        f = PartialMap(M, M, {"a": "b", "b": "a"})
        c = generate_corpus([M], 2, seed=3)
        assert check_f_elementary(f, c).lines() == check_f_elementary(f, c).lines()


class TestApprox:
    def test_small_perturbation_passes_approximately(self):
        f = PartialMap(MA, one("26/100"), {"a": "a"})
        assert check_f_elementary(f, POINT).status == "fail"
        assert check_approx_f_elementary(f, POINT).ok

    def test_large_perturbation(self):
        r = check_approx_f_elementary(PartialMap(MA, one("1/2"), {"a": "a"}), POINT)
        assert r.status == "fail"
        assert "eps=1/8" in r.counterexamples[0].detail


class TestEmbedding:
    def test_exact_tables(self):
        r = check_partial_f_embedding(PartialMap.identity(M), generate_corpus([M], 2, h_quantifiers=False))
        assert r.ok
        assert {x.label for x in r.results} == {"forward", "backward"}

    def test_moved_value(self):
        r = check_partial_f_embedding(PartialMap(MA, one("1/2"), {"a": "a"}), POINT)
        fwd = r.by_label("forward")
        assert fwd.status == "fail" and "point" in str(fwd.counterexamples[0].line())

    def test_rejects_h_quantifiers(self):
        with pytest.raises(FormulaError):
            check_partial_f_embedding(PartialMap.identity(M), corpus("(existsH y (= x y))"))


class TestApproxTransfer:
    def test_identity(self):
        assert check_approx_transfer(PartialMap.identity(M), generate_corpus([M], 2)).ok

    def test_perturbed(self):
        r = check_approx_transfer(PartialMap(MA, one("26/100"), {"a": "a"}), POINT)
        assert r.ok and all("M':True,N':True" in x.detail for x in r.results)

    def test_precondition(self):
        r = check_approx_transfer(PartialMap(MA, one("1/2"), {"a": "a"}), POINT)
        assert r.status == "precondition-failed"


class TestTarskiVaught:
    def test_whole(self):
        assert tarski_vaught_check(M, M, generate_corpus([M], 2)).ok

    def test_three_quarters_fails_condition_two(self):
        r = tarski_vaught_check(MA, M, corpus("(in ((g x)) (point 3/4))"))
        assert r.by_label("tv2").status == "fail"
        assert r.by_label("tv3").ok

    def test_quarter_fails_condition_three(self):
        r = tarski_vaught_check(MA, M, POINT)
        assert r.by_label("tv3").status == "fail"
        assert r.by_label("tv2").ok

    def test_classical(self):
        n = load_structure("[sig]\nrel P/1\nfunS g/1\n[domain]\na b\n[rel P] a\n[funS g]\na->0 b->0\n")
        c = corpus("(P x)", "(not (P x))", sig=n.signature)
        assert tarski_vaught_check(n.restrict(["a"]), n, c).status == "fail"
        assert tarski_vaught_check(n, n, c).ok

    def test_table_disagreement(self):
        with pytest.raises(StructureError):
            tarski_vaught_check(one("1/2"), M, POINT)


def test_load_map(tmp_path):
    (tmp_path / "m.txt").write_text("[sig]\nfunS g/1\n[domain]\na b\n[funS g]\na->1/4 b->3/4\n")
    f = load_map("[source] m.txt\n[target] m.txt\n[map] a->b\n", str(tmp_path))
    assert f.mapping == {"a": "b"} and f.dom == ("a",)
    with pytest.raises(StructureError):
        load_map("[source] m.txt\n[map] a->b\n", str(tmp_path))


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_elementary_implies_approximate(seed):
    rng = random.Random(seed)
    m = random_structure(rng)
    n = random_structure(rng)
    f = PartialMap(m, n, {a: rng.choice(n.domain) for a in m.domain if rng.random() < 0.7})
    c = generate_corpus([m, n], 2, per_depth=6, seed=seed)
    if check_f_elementary(f, c).ok:
        assert check_approx_f_elementary(f, c).ok


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_embedding_directions_agree_on_atoms(seed):
    rng = random.Random(seed)
    m = random_structure(rng)
    n = random_structure(rng)
    f = PartialMap(m, n, {a: rng.choice(n.domain) for a in m.domain})
    atoms = generate_corpus([m, n], 0)
    r = check_partial_f_embedding(f, atoms)
    assert r.by_label("forward").ok == r.by_label("backward").ok

