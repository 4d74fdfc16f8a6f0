"""Acceptance suite: one test per criterion, printed pass lines.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
lines.  Every tolerance and count is pinned here; nothing is deferred.
"""

import itertools
import random

from kirbycalc.cli import main as cli_main
from kirbycalc.cobordism import AttachmentModel, attach, trivial_ends_model
from kirbycalc.forms import (
    decorated_module,
    module_hom,
    preserves_form,
    split_preserving_g_on_a,
    split_projection,
)
from kirbycalc.genus import (
    a_g,
    char_class_instance,
    identity_disk_bundle_table,
    kervaire_milnor_obstruction,
    sum_stability_check,
)
from kirbycalc.handlebody import (
    boundary_block_matrix,
    homology,
    mazur_cork_template,
    profiles_isomorphic,
    w_minus,
    w_plus,
)
from kirbycalc.intmat import IntMatrix, determinant, is_unimodular, smith_normal_form
from kirbycalc.legendrian import steinify, thurston_bennequin
from kirbycalc.textio import parse_handlebody, render_handlebody, render_module
from kirbycalc.values import POS_INF, OrderedValue

from .gens import (
    box_keys,
    equivalent_copy,
    rand_decorated,
    rand_handlebody,
    rand_matrix,
    rand_split_instance,
)


def _report(num, text):
    print(f"ACCEPTANCE {num:02d} PASS - {text}")


def test_criterion_01_snf_suite():
    rng = random.Random(1001)
    failures = 0
    for _ in range(1000):
        m = rand_matrix(rng, max_dim=6, max_entry=9)
        s = smith_normal_form(m)
        ok = s.u.mul(m).mul(s.v).equals(s.d)
        ok = ok and is_unimodular(s.u) and is_unimodular(s.v)
        diag = s.diagonal()
        ok = ok and all(d >= 0 for d in diag)
        for a, b in zip(diag, diag[1:]):
            ok = ok and (b % a == 0 if a != 0 else b == 0)
        if not ok:
            failures += 1
    assert failures == 0
    _report(1, "SNF suite: 1000 random matrices, 0 failures")


def test_criterion_02_mazur_cork_invariants():
    for r, s, m in itertools.product((1, 2, 3), repeat=3):
        c = mazur_cork_template(r, s, m)
        p = homology(c)
        assert p.h1.is_trivial
        assert p.h2_rank == 0
        assert abs(determinant(boundary_block_matrix(c))) == 1
        assert p.boundary_h1.is_trivial
    _report(2, "Mazur templates: all (r,s,m) in {1,2,3}^3 contractible with "
               "homology-sphere boundary")


def test_criterion_03_w_move_invariance():
    rng = random.Random(1003)
    failures = 0
    for _ in range(200):
        h = rand_handlebody(rng, max_k=3, max_n=3, max_entry=3, min_n=1)
        target = rng.randrange(h.n)
        p = rng.randint(1, 3)
        out = rng.choice((w_minus, w_plus))(h, target, p)
        ok = profiles_isomorphic(homology(h), homology(out), bound=2)
        ok = ok and all(
            out.two_handles[i].framing == h.two_handles[i].framing
            for i in range(h.n)
        )
        if not ok:
            failures += 1
    assert failures == 0
    _report(3, "W-moves: 200 random instances preserve the homology profile "
               "and framings, 0 failures")


def test_criterion_04_steinification():
    rng = random.Random(1004)
    for _ in range(100):
        h = rand_handlebody(rng, max_k=3, max_n=3, with_fronts=True)
        out = steinify(h)
        for th in out.two_handles:
            assert th.framing == thurston_bennequin(th.front) - 1
        raised = [i for i, th in enumerate(h.two_handles)
                  if th.framing >= thurston_bennequin(th.front)]
        assert len(out.two_handles) == len(h.two_handles) + len(raised)
        for i in raised:
            t_old = thurston_bennequin(h.two_handles[i].front)
            p = h.two_handles[i].framing - t_old + 1
            assert (thurston_bennequin(out.two_handles[i].front)
                    == t_old + p)
        assert profiles_isomorphic(homology(h), homology(out), bound=2)
        assert steinify(out) == out
    _report(4, "steinify: 100 random decorated handlebodies reach framing = "
               "tb - 1 with one raise per overframed handle, profile kept, "
               "idempotent")


def test_criterion_05_split_projection_oracle():
    rng = random.Random(1005)
    failures = 0
    for _ in range(500):
        slot = rng.choice((None, "a", "b"))
        inst = rand_split_instance(rng, torsion_slot=slot)
        try:
            ha, hb = split_projection(inst.phi, inst.split, inst.split)
        except Exception:
            failures += 1
            continue
        if not (ha.is_isomorphism() and preserves_form(ha)
                and hb.is_isomorphism() and preserves_form(hb)):
            failures += 1
    assert failures == 0
    _report(5, "projection lemma: 500 random split isomorphisms project to "
               "verified isometries, 0 failures")


def test_criterion_06_monotone_projection_oracle():
    rng = random.Random(1006)
    failures = 0
    for _ in range(200):
        slot = rng.choice((None, "a", "b"))
        inst = rand_split_instance(rng, torsion_slot=slot, with_g=True)
        rep = split_preserving_g_on_a(inst.phi, inst.split, inst.split)
        table = inst.split.total.gvalues
        for key in table:
            if not inst.split.lies_in_a(key):
                continue
            img = rep.hom.apply(inst.split.a_coords(key))
            if table.get(inst.split.embed_a(img)) != table[key]:
                failures += 1
    assert failures == 0
    _report(6, "monotone-value projection: 200 instances, A-component "
               "preserves every tabulated value with entries within 2, "
               "0 failures")


def test_criterion_07_characteristic_obstruction_fixture():
    inst = char_class_instance(IntMatrix(((-1, 0), (0, -1))), (3, 1))
    res = kervaire_milnor_obstruction(inst)
    assert res.residue == -8
    assert res.positive_genus_forced
    plain = kervaire_milnor_obstruction(
        char_class_instance(IntMatrix(((1,),)), (1,)))
    assert not plain.positive_genus_forced
    even = kervaire_milnor_obstruction(
        char_class_instance(IntMatrix(((1, 0), (0, 1))), (1, 1)))
    assert not even.positive_genus_forced
    _report(7, "mod-16 obstruction: residue -8 forces positive genus; the "
               "two unobstructed fixtures report false")


def test_criterion_08_lower_bound_fixture():
    t = identity_disk_bundle_table(10)
    for r in range(0, 11):
        got = a_g(r, 0, t)
        assert got.value == OrderedValue.of(r) and not got.capped
    for r in (-3, -1):
        assert a_g(r, 0, t).value == OrderedValue.of(0)
    for r in (11, 20):
        got = a_g(r, 0, t)
        assert got.value == POS_INF and got.capped
    previous = None
    for r in range(-3, 15):
        value = a_g(r, 0, t).value
        if previous is not None:
            assert previous <= value
        previous = value
    _report(8, "lower-bound function: identity table reproduces r on 0..10, "
               "clamps below, caps above, monotone throughout")


def test_criterion_09_sum_stability():
    rng = random.Random(1009)
    z_trivial = decorated_module(())
    violations = 0
    for _ in range(100):
        d1 = rand_decorated(rng, rank=rng.randint(1, 2))
        d2 = (equivalent_copy(rng, d1) if rng.random() < 0.5
              else rand_decorated(rng, rank=d1.free_rank))
        rep = sum_stability_check(d1, d2, z_trivial, z_trivial, "h2zero", 2)
        if not rep.implication_ok:
            violations += 1
    assert violations == 0
    for _ in range(50):
        d1 = rand_decorated(rng, rank=rng.randint(1, 2), nondegenerate=True)
        d2 = (equivalent_copy(rng, d1) if rng.random() < 0.5
              else rand_decorated(rng, rank=d1.free_rank, nondegenerate=True))
        z1 = decorated_module((0,), None,
                              {k: 0 for k in box_keys((0,), 2)})
        z2 = decorated_module((0,), None,
                              {k: 0 for k in box_keys((0,), 2)})
        rep = sum_stability_check(d1, d2, z1, z2, "nondegenerate", 2)
        if not rep.implication_ok:
            violations += 1
    assert violations == 0
    _report(9, "sum stability: 100 trivial-Z pairs agree exactly and 50 "
               "non-degenerate instances satisfy the implication, "
               "0 violations")


def test_criterion_10_interval_forced_equality():
    rng = random.Random(1010)
    for _ in range(100):
        x = rand_decorated(rng, rank=rng.randint(0, 2),
                           torsion=rng.random() < 0.3)
        k_rank = rng.randint(0, 2)
        k = decorated_module((0,) * k_rank, None,
                             {key: 0 for key in box_keys((0,) * k_rank, 1)})
        cob = trivial_ends_model(k)
        glue = module_hom(cob.h2_m, x, IntMatrix.zeros(x.ngens, 0))
        res = attach(AttachmentModel(x=x, cob=cob, glue=glue))
        out = res.module.gvalues
        for alpha, val in x.gvalues.items():
            assert out[alpha + (0,) * len(res.k_orders)] == val
            for pkey, pval in k.gvalues.items():
                beta = cob.k_part.membership(pkey)
                assert pval == OrderedValue.of(0)
                assert out[alpha + beta] == val
    _report(10, "attachment estimate: 100 zero-table attachments force the "
                "glued values to equal the originals on every modeled class")


def test_criterion_11_cli_roundtrip_and_exit_codes(tmp_path, capsys):
    rng = random.Random(1011)
    for _ in range(100):
        h = rand_handlebody(rng, with_fronts=rng.random() < 0.5)
        text = render_handlebody(h)
        assert render_handlebody(parse_handlebody(text)) == text

    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    good = write("good.hb",
                 "handlebody v1\none_handles 0\ntwo_handle 1 word= framing=0\n")
    twisted = write("twisted.hb",
                    "handlebody v1\none_handles 0\ntwo_handle 1 word= framing=1\n")
    malformed = write("bad.hb", "handlebody v1\nbogus\n")
    badgen = write("badgen.hb",
                   "handlebody v1\none_handles 0\ntwo_handle 1 word=1 framing=0\n")
    mod_a = write("a.mod", render_module(
        decorated_module((0,), IntMatrix(((1,),)),
                         {(1,): 0, (0,): 0, (-1,): 0})))
    mod_b = write("b.mod", render_module(
        decorated_module((0,), IntMatrix(((1,),)),
                         {(1,): 7, (0,): 0, (-1,): 7})))
    cases = [
        (("homology", good), 0),
        (("boundary", good), 0),
        (("hihc", good, good), 0),
        (("equiv", mod_a, mod_a), 0),
        (("hihc", good, twisted), 1),
        (("equiv", mod_a, mod_b), 1),
        (("homology", malformed), 2),
        (("homology", badgen), 2),
        (("homology", str(tmp_path / "missing.hb")), 2),
    ]
    for argv, expected in cases:
        code = cli_main(list(argv))
        capsys.readouterr()
        assert code == expected, f"{argv} -> {code}, wanted {expected}"
    _report(11, "CLI: 100 byte-stable round trips and the 9-case exit-code "
                "matrix hold")
