"""Tests for the cops-and-robber game, havens, and linkedness checks."""

from __future__ import annotations

import random

import pytest

from dtwone.cycles import CycleChain, cycle_hypergraph, find_closed_chain
from dtwone.decomp import DirectedBranchDecomposition, validate_dbd
from dtwone.digraph import (
    a4_digraph,
    bicycle,
    digraph_from_edges,
    directed_cycle_digraph,
)
from dtwone.errors import InstanceTooLarge
from dtwone.games import (
    CopStrategy,
    Haven,
    _components_avoiding,
    _robber_options,
    dcn_exact,
    haven_from_closed_chain,
    hyper_components,
    is_k_hyperlinked,
    is_k_linked,
    play_transcript,
    solve_game,
    strategy_beats_all_robbers,
    strategy_from_dbd,
    verify_haven,
)
from dtwone.hypergraph import dual
from test_digraph import random_strongly_connected


def digon():
    return digraph_from_edges(2, [(0, 1), (1, 0)])


class TestRobberMoves:
    def test_components_sorted_by_least_vertex(self):
        d = digraph_from_edges(4, [(0, 1), (1, 0), (2, 3), (3, 2)])
        assert _components_avoiding(d, frozenset()) == (
            frozenset({0, 1}),
            frozenset({2, 3}),
        )
        assert _components_avoiding(d, frozenset({0, 1, 2, 3})) == ()

    def test_landing_inside_new_cop_free_components(self):
        d = digon()
        opts = _robber_options(d, frozenset(), frozenset({0, 1}), frozenset({0}))
        assert opts == (frozenset({1}),)

    def test_lifted_cop_frees_the_whole_component(self):
        # While the cops fly from {0} to {1} nobody blocks vertex 0, so the
        # robber runs through it and survives on the other side.
        d = digon()
        opts = _robber_options(d, frozenset({0}), frozenset({1}), frozenset({1}))
        assert opts == (frozenset({0}),)

    def test_standing_cops_keep_blocking(self):
        d = bicycle(3)
        opts = _robber_options(d, frozenset({0}), frozenset({1, 2}), frozenset({0, 1}))
        assert opts == (frozenset({2}),)


class TestSolveGame:
    def test_single_vertex(self):
        d = digraph_from_edges(1, [])
        assert solve_game(d, 0).cops_win is False
        res = solve_game(d, 1)
        assert res.cops_win is True
        assert strategy_beats_all_robbers(d, res.strategy)

    def test_digon(self):
        d = digon()
        assert solve_game(d, 1).cops_win is False
        assert solve_game(d, 1).strategy is None
        res = solve_game(d, 2)
        assert res.cops_win is True
        assert strategy_beats_all_robbers(d, res.strategy)

    def test_directed_triangle(self):
        d = directed_cycle_digraph(3)
        assert solve_game(d, 1).cops_win is False
        res = solve_game(d, 2)
        assert res.cops_win is True
        assert strategy_beats_all_robbers(d, res.strategy)

    def test_bidirected_triangle(self):
        d = bicycle(3)
        assert solve_game(d, 2).cops_win is False
        res = solve_game(d, 3)
        assert res.cops_win is True
        assert strategy_beats_all_robbers(d, res.strategy)

    def test_a4(self):
        d = a4_digraph()
        assert solve_game(d, 2).cops_win is False
        res = solve_game(d, 3)
        assert res.cops_win is True
        assert strategy_beats_all_robbers(d, res.strategy)

    def test_budget_respected_in_returned_strategy(self):
        res = solve_game(bicycle(3), 3)
        assert len(res.strategy.initial) <= 3
        assert all(len(x) <= 3 for x in res.strategy.table.values())

    def test_instance_too_large(self):
        with pytest.raises(InstanceTooLarge):
            solve_game(directed_cycle_digraph(12), 6)

    def test_random_wins_are_simulation_checked_and_monotone(self):
        rng = random.Random(2024)
        for _ in range(30):
            n = rng.randint(2, 4)
            d = random_strongly_connected(rng, n, 0.4)
            best = None
            for k in range(n + 1):
                res = solve_game(d, k)
                if res.cops_win:
                    best = k
                    assert strategy_beats_all_robbers(d, res.strategy)
                    break
            assert best is not None, "n cops always win"
            assert solve_game(d, best + 1).cops_win is True
            if best > 0:
                assert solve_game(d, best - 1).cops_win is False


class TestDcnExact:
    def test_frozen_values(self):
        assert dcn_exact(digraph_from_edges(1, []), 3) == 1
        assert dcn_exact(digon(), 4) == 2
        assert dcn_exact(directed_cycle_digraph(3), 4) == 2
        assert dcn_exact(a4_digraph(), 4) == 3
        assert dcn_exact(bicycle(3), 3) == 3

    def test_budget_exhausted_gives_none(self):
        assert dcn_exact(bicycle(3), 2) is None


class TestStrategyFromDbd:
    def test_digon_two_node_tree(self):
        d = digon()
        dec = DirectedBranchDecomposition(
            (0, 1), ((0, 1),), {0: 0, 1: 1}, {(0, 1): frozenset({0})}
        )
        s = strategy_from_dbd(d, dec)
        assert s.budget == 3
        assert strategy_beats_all_robbers(d, s)

    def test_triangle_star(self):
        d = directed_cycle_digraph(3)
        dec = DirectedBranchDecomposition(
            (0, 1, 2, 3),
            ((0, 3), (1, 3), (2, 3)),
            {0: 0, 1: 1, 2: 2},
            {(0, 3): frozenset({0}), (1, 3): frozenset({1}), (2, 3): frozenset({2})},
        )
        s = strategy_from_dbd(d, dec)
        assert s.budget == 3
        assert strategy_beats_all_robbers(d, s)

    def test_bidirected_square_balanced_tree(self):
        d = bicycle(4)
        dec = DirectedBranchDecomposition(
            (0, 1, 2, 3, 4, 5),
            ((0, 4), (1, 4), (2, 5), (3, 5), (4, 5)),
            {0: 0, 1: 1, 2: 2, 3: 3},
            {
                (0, 4): frozenset({0}),
                (1, 4): frozenset({1}),
                (2, 5): frozenset({2}),
                (3, 5): frozenset({3}),
                (4, 5): frozenset({1, 3}),
            },
        )
        assert validate_dbd(d, dec, bound=4).width == 2
        s = strategy_from_dbd(d, dec)
        assert s.budget == 6
        assert strategy_beats_all_robbers(d, s)

    def test_single_vertex_single_node(self):
        d = digraph_from_edges(1, [])
        dec = DirectedBranchDecomposition((0,), (), {0: 0}, {})
        s = strategy_from_dbd(d, dec)
        assert s.budget == 1
        assert s.initial == frozenset({0})
        assert strategy_beats_all_robbers(d, s)

    def test_invalid_decomposition_rejected(self):
        d = digon()
        dec = DirectedBranchDecomposition(
            (0, 1), ((0, 1),), {0: 0, 1: 1}, {(0, 1): frozenset()}
        )
        with pytest.raises(ValueError):
            strategy_from_dbd(d, dec)

    def test_needs_strong_connectivity(self):
        d = digraph_from_edges(2, [(0, 1)])
        dec = DirectedBranchDecomposition(
            (0, 1), ((0, 1),), {0: 0, 1: 1}, {(0, 1): frozenset()}
        )
        with pytest.raises(ValueError):
            strategy_from_dbd(d, dec)

    def test_random_width_one_instances(self):
        # Bidirected trees have branch decompositions of width one; the walk
        # must then get by with three cops.
        from dtwone.digraph import bidirect

        d = bidirect(4, [(0, 1), (1, 2), (1, 3)])
        dec = DirectedBranchDecomposition(
            (0, 1, 2, 3, 4, 5),
            ((0, 4), (1, 4), (2, 5), (3, 5), (4, 5)),
            {0: 0, 1: 1, 2: 2, 3: 3},
            {
                (0, 4): frozenset({0}),
                (1, 4): frozenset({1}),
                (2, 5): frozenset({2}),
                (3, 5): frozenset({3}),
                (4, 5): frozenset({1}),
            },
        )
        assert validate_dbd(d, dec, bound=4).valid
        s = strategy_from_dbd(d, dec)
        assert s.budget == 3
        assert strategy_beats_all_robbers(d, s)


class TestHavens:
    def chain_of(self, d):
        chain = find_closed_chain(cycle_hypergraph(d))
        assert chain is not None
        return chain

    def test_a4_haven(self):
        d = a4_digraph()
        hav = haven_from_closed_chain(d, self.chain_of(d))
        assert hav.order == 3
        assert verify_haven(d, hav)

    def test_bidirected_triangle_haven(self):
        d = bicycle(3)
        hav = haven_from_closed_chain(d, self.chain_of(d))
        assert verify_haven(d, hav)

    def test_bidirected_hexagon_haven(self):
        d = bicycle(6)
        hav = haven_from_closed_chain(d, self.chain_of(d))
        assert verify_haven(d, hav)

    def test_haven_blocks_two_cops(self):
        for d in (a4_digraph(), bicycle(3), bicycle(6)):
            hav = haven_from_closed_chain(d, self.chain_of(d))
            assert verify_haven(d, hav)
            assert solve_game(d, 2).cops_win is False

    def test_open_chain_rejected(self):
        d = a4_digraph()
        with pytest.raises(ValueError):
            haven_from_closed_chain(d, CycleChain((0, 4, 6), False))

    def test_unknown_cycle_rejected(self):
        d = a4_digraph()
        with pytest.raises(ValueError):
            haven_from_closed_chain(d, CycleChain((0, 4, 99), True))

    def test_repeated_cycle_rejected(self):
        d = directed_cycle_digraph(5)
        with pytest.raises(ValueError):
            haven_from_closed_chain(d, CycleChain((0, 0, 0), True))

    def test_verify_rejects_missing_assignment(self):
        d = digon()
        hav = Haven(2, {frozenset(): frozenset({0, 1})})
        assert verify_haven(d, hav) is False

    def test_verify_rejects_non_component(self):
        d = digon()
        hav = Haven(
            1,
            {frozenset(): frozenset({0})},
        )
        assert verify_haven(d, hav) is False

    def test_verify_order_one(self):
        d = digon()
        hav = Haven(1, {frozenset(): frozenset({0, 1})})
        assert verify_haven(d, hav) is True

    def test_verify_checks_monotonicity(self):
        d = digraph_from_edges(4, [(0, 1), (1, 0), (2, 3), (3, 2)])
        base = {
            frozenset(): frozenset({0, 1}),
            frozenset({0}): frozenset({1}),
            frozenset({1}): frozenset({0}),
            frozenset({2}): frozenset({0, 1}),
            frozenset({3}): frozenset({0, 1}),
        }
        assert verify_haven(d, Haven(2, base)) is True
        twisted = dict(base)
        twisted[frozenset({0})] = frozenset({2, 3})
        assert verify_haven(d, Haven(2, twisted)) is False


class TestLinked:
    def test_digon_values(self):
        d = digon()
        assert is_k_linked(d, {0, 1}, 0) is True
        assert is_k_linked(d, {0, 1}, 1) is False

    def test_bidirected_triangle_values(self):
        d = bicycle(3)
        assert is_k_linked(d, {0, 1, 2}, 1) is True
        assert is_k_linked(d, {0, 1, 2}, 2) is False

    def test_hyperlinked_digon_dual(self):
        d = digon()
        h = dual(cycle_hypergraph(d).as_hypergraph())
        assert is_k_hyperlinked(h, {0, 1}, 1) is True
        assert is_k_hyperlinked(h, {0, 1}, 2) is False

    def test_same_k_translation_fails_on_the_digon(self):
        # Only the shifted pairing holds: 1-linked is false for the digon
        # while its dual is 1-hyperlinked, because deleting zero hyperedges
        # never splits anything.
        d = digon()
        h = dual(cycle_hypergraph(d).as_hypergraph())
        assert is_k_linked(d, {0, 1}, 1) != is_k_hyperlinked(h, {0, 1}, 1)

    def test_hyper_components(self):
        d = bicycle(3)
        h = dual(cycle_hypergraph(d).as_hypergraph())
        assert len(hyper_components(h, frozenset())) == 1
        assert hyper_components(h, frozenset(range(len(h.vertices)))) == ()

    def test_pairing_on_random_digraphs(self):
        rng = random.Random(99)
        for _ in range(200):
            n = rng.randint(2, 5)
            d = random_strongly_connected(rng, n, 0.4)
            h = dual(cycle_hypergraph(d).as_hypergraph())
            w = [v for v in range(d.n) if rng.random() < 0.6] or [0]
            for k in range(3):
                assert is_k_linked(d, w, k) == is_k_hyperlinked(h, w, k + 1), (
                    sorted(d.edges),
                    w,
                    k,
                )

    def test_component_bijection_on_random_digraphs(self):
        rng = random.Random(4242)
        for _ in range(200):
            n = rng.randint(2, 5)
            d = random_strongly_connected(rng, n, 0.4)
            ch = cycle_hypergraph(d)
            h = dual(ch.as_hypergraph())
            s = frozenset(v for v in range(d.n) if rng.random() < 0.4)
            touched = frozenset(
                i for i, e in enumerate(ch.hyperedges) if set(e) & s
            )
            left = sorted(hyper_components(h, touched), key=min)
            right = sorted(
                (
                    frozenset(
                        i for i, e in enumerate(ch.hyperedges) if set(e) <= comp
                    )
                    for comp in _components_avoiding(d, s)
                    if any(set(e) <= comp for e in ch.hyperedges)
                ),
                key=min,
            )
            assert left == right, (sorted(d.edges), sorted(s))


class TestPlayTranscript:
    def test_capture_on_digon(self):
        d = digon()
        result = solve_game(d, 2)
        assert result.cops_win
        moves = play_transcript(d, result.strategy)
        assert moves[-1][1] == frozenset()
        assert all(len(x) <= 2 for x, _ in moves)

    def test_capture_on_bicycle_with_three(self):
        d = bicycle(3)
        result = solve_game(d, 3)
        moves = play_transcript(d, result.strategy)
        assert moves[-1][1] == frozenset()
        assert len(moves) >= 2

    def test_rounds_are_legal_positions(self):
        d = a4_digraph()
        result = solve_game(d, 3)
        moves = play_transcript(d, result.strategy)
        for x, r in moves[:-1]:
            assert r in _components_avoiding(d, x)

    def test_hole_in_table_raises(self):
        broken = CopStrategy(budget=2, initial=frozenset(), table={})
        with pytest.raises(ValueError):
            play_transcript(digon(), broken)

    def test_loop_detected(self):
        d = digon()
        stuck = CopStrategy(
            budget=1,
            initial=frozenset({0}),
            table={(frozenset({0}), frozenset({1})): frozenset({0})},
        )
        with pytest.raises(ValueError):
            play_transcript(d, stuck)
