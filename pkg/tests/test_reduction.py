import pytest

from griddy import engine as E
from griddy import reduction as R
from griddy.engine import EngineConfig
from griddy.lattice import QuotientGraphBuilder, verify_embedding
from griddy.reduction import (
    GadgetGraph,
    ReductionError,
    ReductionParams,
    armature_base,
    chain_length,
    chain_points,
    default_params,
    flag_endpoint,
    link_square,
    side_chain_base,
)


class TestParams:
    def test_defaults(self, fig1, xxx):
        assert default_params(fig1) == ReductionParams(w=25, h=16)
        assert default_params(xxx) == ReductionParams(w=9, h=6)

    def test_width_bound_strict(self, fig1):
        # n=4, m=3 needs w >= 25.
        with pytest.raises(ReductionError, match="w=24"):
            ReductionParams(w=24, h=16).check(4, 3)

    def test_height_bound_strict(self, fig1):
        with pytest.raises(ReductionError, match="h=15"):
            ReductionParams(w=25, h=15).check(4, 3)

    def test_larger_params_accepted(self, fig1):
        ReductionParams(w=30, h=20).check(4, 3)


class TestFrameAndAxis:
    def test_counts_against_point_oracle(self):
        # Independent vertex oracle: the canonical coordinates are injective,
        # so the number of distinct points is the vertex count.
        for w, h in ((9, 6), (25, 16), (11, 8)):
            params = ReductionParams(w=w, h=h)
            g = R.frame_axis_only(params)
            pts = R.frame_axis_points(params)
            assert g.graph.n == len(set(pts.values()))
            assert g.graph.n == 4 * h + 3 * w + 1
            assert len(g.graph.edges) == 6 * h + 4 * w + 1

    def test_small_frame_counts(self):
        g = R.frame_axis_only(ReductionParams(w=9, h=6))
        assert (g.graph.n, len(g.graph.edges)) == (52, 73)

    def test_axis_path_length(self):
        # The axis runs from (1,0) to (w+1,0): w unit edges along y=0, plus
        # the bottom edge of each wall.
        params = ReductionParams(w=9, h=6)
        g = R.frame_axis_only(params)
        emb = R.canonical_frame_embedding(g)
        axis_edges = [
            (u, v) for u, v in g.graph.edges if emb[u][1] == 0 and emb[v][1] == 0
        ]
        assert len(axis_edges) == params.w + 2

    def test_canonical_corner_points(self):
        pts = R.frame_axis_points(ReductionParams(w=9, h=6))
        assert pts["H[1]"] == (2, 0)
        assert pts["H[8]"] == (9, 0)
        assert pts["L[0].4"] == (0, 0)
        assert pts["L[0].3"] == (1, 0)
        assert pts["R[0].4"] == (10, 0)
        assert pts["T[0].1"] == (1, 6)

    def test_frame_embedding_accepted(self):
        g = R.frame_axis_only(ReductionParams(w=9, h=6))
        assert verify_embedding(g.graph, R.canonical_frame_embedding(g)).accepted


class TestLayout:
    def test_side_chain_lengths(self):
        # n=4, m=3: inner chains have 14 squares, outer 5.
        assert 2 * 3 + 2 * 4 == 14
        assert 2 * 3 - 1 == 5
        p = ReductionParams(w=25, h=16)
        assert side_chain_base(p, 4, 3, 1) == 1
        assert side_chain_base(p, 4, 3, 2) == 19

    def test_armature_lengths(self):
        assert [chain_length(4, 3, k) for k in (1, 2, 3, 4)] == [13, 11, 9, 7]
        # Armature n always has 2m+1 squares.
        for n in (1, 2, 3, 4):
            for m in (1, 2, 3):
                assert chain_length(n, m, n) == 2 * m + 1

    def test_armature_bases_four_apart(self):
        p = ReductionParams(w=25, h=16)
        bases = [armature_base(p, 4, 3, k) for k in (1, 2, 3, 4)]
        assert bases == [4, 8, 12, 16]
        assert all(b2 - b1 == 4 for b1, b2 in zip(bases, bases[1:]))

    def test_bases_on_axis_at_minimum_params(self):
        for n in (1, 2, 3, 4):
            for m in (1, 2, 3):
                p = ReductionParams(w=2 * m + 4 * n + 3, h=2 * m + 2 * n + 2)
                for k in range(1, n + 1):
                    b = armature_base(p, n, m, k)
                    assert 1 <= b and b + 1 <= p.w - 1
                for which in (1, 2):
                    b = side_chain_base(p, n, m, which)
                    assert 1 <= b and b + 1 <= p.w - 1

    def test_link_square(self):
        assert link_square(1, 1, 4) == 7
        assert link_square(4, 1, 4) == 1
        assert link_square(4, 3, 4) == 5
        # The lowest link never reaches square 0.
        for n in (1, 2, 3, 4):
            for i in range(1, n + 1):
                assert link_square(i, 1, n) >= 1


class TestBuild:
    def test_flags_add_one_vertex_two_edges_each(self, fig1):
        params = default_params(fig1)

        def base_builder():
            b = QuotientGraphBuilder()
            R.build_frame_and_axis(b, params)
            R.build_side_chains(b, params, fig1.n, fig1.m)
            R.build_armatures(b, params, fig1.n, fig1.m)
            return b

        g0 = base_builder().finalize()
        b = base_builder()
        R.add_flags(b, fig1)
        g1 = b.finalize()
        k = len(E.build_engine(fig1).flags())
        assert k == 15
        assert g1.n == g0.n + k
        assert len(g1.edges) == len(g0.edges) + 2 * k

    def test_reduce_fig1(self, fig1):
        g = R.reduce(fig1)
        assert (g.graph.n, len(g.graph.edges)) == (497, 687)
        assert g.n == 4 and g.m == 3
        assert g.vertex("H[1]") == g.index["H[1]"]

    def test_reduce_deterministic(self, fig1):
        a, b = R.reduce(fig1), R.reduce(fig1)
        assert a.graph == b.graph and a.index == b.index

    def test_reduce_n1(self, xxx):
        g = R.reduce(xxx)
        assert g.params == ReductionParams(w=9, h=6)
        assert g.flag_roles() == [("ap", 1, 1)]

    def test_flag_roles_match_engine(self, fig1, unsat_n2):
        for f in (fig1, unsat_n2):
            g = R.reduce(f)
            assert g.flag_roles() == list(E.build_engine(f).flags())
            assert R.engine_of(g) == E.build_engine(f)

    def test_index_json_roundtrip(self, xxx):
        g = R.reduce(xxx)
        assert R.index_from_json(R.index_to_json(g.index)) == g.index


class TestChainGeometry:
    def test_square_zero_base(self):
        c1, c2, c3, c4 = chain_points(5, "up", 0)
        assert c4 == (5, 0) and c3 == (6, 0)
        assert c1 == (5, 1) and c2 == (6, 1)

    def test_corner2_meets_next_corner4(self):
        for direction in ("up", "down"):
            for t in range(6):
                here = chain_points(3, direction, t)
                there = chain_points(3, direction, t + 1)
                assert here[1] == there[3]  # corner 2 ~ corner 4

    def test_diagonal_choices_same_point_set(self):
        for direction in ("up", "down"):
            for t in range(4):
                a = set(chain_points(7, direction, t, "side1"))
                b = set(chain_points(7, direction, t, "side2"))
                assert a == b and len(a) == 4

    def test_down_is_mirror_of_up(self):
        for t in range(5):
            up = chain_points(4, "up", t)
            down = chain_points(4, "down", t)
            assert [(x, -y) for x, y in up] == list(down)

    def test_band(self):
        # Up chain squares stay inside the three diagonals x-y in {X-1,X,X+1}.
        for t in range(8):
            for x, y in chain_points(6, "up", t):
                assert x - y in (5, 6, 7)

    def test_bands_pairwise_disjoint(self, fig1):
        g = R.reduce(fig1)
        plans = R._chain_plan(g)
        pointsets = []
        for fam, k, bx, length in plans:
            direction = "down" if fam.endswith("'") else "up"
            pts = set()
            for t in range(length):
                pts |= {p for p in chain_points(bx, direction, t) if p[1] != 0}
            pointsets.append((fam, pts))
        for i in range(len(pointsets)):
            for j in range(i + 1, len(pointsets)):
                assert not (pointsets[i][1] & pointsets[j][1]), (
                    pointsets[i][0],
                    pointsets[j][0],
                )


class TestFlagGeometry:
    def test_adjacent_armatures_share_endpoint(self):
        # Armature i pointing right and armature i+1 pointing left target the
        # same slot, and the constructive endpoints coincide.
        p = ReductionParams(w=25, h=16)
        n, m = 4, 3
        for j in (1, 2, 3):
            for i in (1, 2, 3):
                bx_i = armature_base(p, n, m, i) + 1
                bx_n = armature_base(p, n, m, i + 1) + 1
                for d in ("up", "down"):
                    assert flag_endpoint(bx_i, d, j, n, i, "right") == flag_endpoint(
                        bx_n, d, j, n, i + 1, "left"
                    )

    def test_leftmost_flag_hits_inner_side_chain(self):
        p = ReductionParams(w=25, h=16)
        n, m = 4, 3
        bx1 = armature_base(p, n, m, 1) + 1
        scx = side_chain_base(p, n, m, 1) + 1
        for j in (1, 2, 3):
            ep = flag_endpoint(bx1, "up", j, n, 1, "left")
            s = 2 * j + 2 * n - 1
            assert ep in set(chain_points(scx, "up", s))

    def test_rightmost_flag_hits_outer_side_chain(self):
        p = ReductionParams(w=25, h=16)
        n, m = 4, 3
        bxn = armature_base(p, n, m, n) + 1
        scx = side_chain_base(p, n, m, 2) + 1
        for j in (2, 3):
            ep = flag_endpoint(bxn, "up", j, n, n, "right")
            s = 2 * j - 2
            assert ep in set(chain_points(scx, "up", s))

    def test_interior_endpoints_on_empty_diagonal(self):
        # A middle armature's endpoints land strictly between the bands.
        p = ReductionParams(w=25, h=16)
        n, m = 4, 3
        for i in (2, 3):
            bx = armature_base(p, n, m, i) + 1
            for j in (1, 2, 3):
                for pointing, expect in (("right", bx + 2), ("left", bx - 2)):
                    x, y = flag_endpoint(bx, "up", j, n, i, pointing)
                    assert x - y == expect

    def test_missing_link_rejected(self):
        with pytest.raises(ReductionError, match="link"):
            flag_endpoint(3, "up", 0, 2, 2, "left")


def full_cfg(f, orientation, directions):
    eng = E.build_engine(f)
    return EngineConfig(
        orientation=orientation,
        flag_dir={flag: directions[flag] for flag in eng.flags()},
    )


class TestWitness:
    def test_fig1_witness_accepted(self, fig1):
        g = R.reduce(fig1)
        cfg = E.exists_flat(E.build_engine(fig1))
        emb = R.witness_embedding(g, cfg)
        assert verify_embedding(g.graph, emb).accepted

    def test_zero_flag_formula_accepted(self):
        from griddy import formula as fml

        f = fml.Formula(n=1, clauses=(fml.clause(1, -1, 1),))
        g = R.reduce(f)
        cfg = EngineConfig(orientation=(True,))
        emb = R.witness_embedding(g, cfg)
        assert verify_embedding(g.graph, emb).accepted

    def test_invalid_config_yields_overlap(self, xxx):
        # (X1,X1,X1): the single flag has nowhere to go; both directions
        # collide with a side chain and the verifier reports exactly one
        # overlapping pair.
        g = R.reduce(xxx)
        for d in ("left", "right"):
            cfg = EngineConfig(orientation=(True,), flag_dir={("ap", 1, 1): d})
            emb = R.witness_embedding(g, cfg)
            rep = verify_embedding(g.graph, emb)
            assert not rep.accepted
            assert len(rep.overlaps) == 1 and not rep.non_unit_edges

    def test_shared_slot_yields_overlap(self, unsat_n2):
        # Force both flags of the same physical row onto the one interior
        # slot: the two endpoints collide.
        g = R.reduce(unsat_n2)
        eng = R.engine_of(g)
        cfg0 = E.exists_flat(eng)
        assert cfg0 is None  # the engine is not flat
        orient = (True, True)
        directions = {}
        for flag in eng.flags():
            kind, i, j = flag
            directions[flag] = "right" if i == 1 else "left"
        emb = R.witness_embedding(g, full_cfg(unsat_n2, orient, directions))
        rep = verify_embedding(g.graph, emb)
        assert not rep.accepted and rep.overlaps

    def test_flag_dir_mismatch_rejected(self, fig1):
        g = R.reduce(fig1)
        with pytest.raises(ReductionError, match="flag"):
            R.witness_embedding(g, EngineConfig(orientation=(True,) * 4))

    def test_flag_forces_link_diagonal(self, fig1):
        # Flipping one flagged link square's free diagonal pair breaks the
        # flag square's unit edges: the choice is rigid.
        g = R.reduce(fig1)
        cfg = E.exists_flat(E.build_engine(fig1))
        emb = dict(R.witness_embedding(g, cfg))
        kind, i, j = g.flag_roles()[0]
        fam = "C" if kind == "a" else "C'"
        s1 = link_square(i, j, g.n)
        u = g.vertex(f"{fam}[k={i}][{s1}].1")
        v = g.vertex(f"{fam}[k={i}][{s1}].3")
        emb[u], emb[v] = emb[v], emb[u]
        rep = verify_embedding(g.graph, emb)
        assert not rep.accepted and rep.non_unit_edges
