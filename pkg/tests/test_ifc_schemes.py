"""Coordinated beamforming schemes for the one-MT-per-BS cluster."""

import numpy as np
import pytest

from cbsim.evaluate import irc_receivers, monte_carlo, per_mt_rates
from cbsim.ifc_schemes import (
    SchemeOutput,
    baseline_full_reuse_su,
    baseline_orthogonal_su,
    check_alignment_feasible,
    default_stream_count,
    ia,
    max_sinr,
    reconfigurable,
    wmmse,
)
from cbsim.model import (
    InfeasibleConfiguration,
    ScenarioConfig,
    TxStrategy,
    check_rx_strategy,
    check_tx_strategy,
    generate_drop,
    oci_covariance,
)
from cbsim.numerics import waterfill


def cluster_cfg(**kw):
    base = dict(num_bs=3, antennas_bs=4, antennas_mt=2, mts_per_bs=(1, 1, 1),
                alpha=1.0, beta=0.0, snr_db_grid=(15.0,), num_drops=50,
                rng_seed=424242, max_iterations=10)
    base.update(kw)
    return ScenarioConfig(**base)


def scheme_sum_rate(out, drop, cfg, oci):
    return float(per_mt_rates(drop, cfg, out, oci).sum())


class TestStreamRules:
    def test_default_stream_count(self):
        assert default_stream_count(cluster_cfg()) == 1
        assert default_stream_count(cluster_cfg(
            num_bs=2, antennas_bs=4, antennas_mt=4, mts_per_bs=(1, 1))) == 2
        # odd min antenna count falls back to the feasibility bound
        assert default_stream_count(cluster_cfg(
            num_bs=2, antennas_bs=2, antennas_mt=1, mts_per_bs=(1, 1))) == 1

    def test_feasibility_check(self):
        cfg = cluster_cfg(antennas_bs=2, antennas_mt=2)
        with pytest.raises(InfeasibleConfiguration):
            check_alignment_feasible(cfg, 2)
        check_alignment_feasible(cfg, 1)
        with pytest.raises(InfeasibleConfiguration):
            check_alignment_feasible(cfg, 0)

    def test_single_user_schemes_reject_multi_mt_cells(self):
        cfg = cluster_cfg(mts_per_bs=(2, 1, 1), num_drops=1)
        drop = generate_drop(cfg, 0, snr_db=15.0)
        for scheme in (ia, max_sinr):
            with pytest.raises(InfeasibleConfiguration):
                scheme(drop, cfg)


class TestIa:
    def test_leakage_oracle_on_random_drops(self):
        # post-combining interference over signal, computed from the
        # returned strategies alone
        cfg = cluster_cfg(num_drops=50)
        users = list(range(3))
        for i in range(cfg.num_drops):
            drop = generate_drop(cfg, i, snr_db=15.0)
            out = ia(drop, cfg)
            assert out.converged
            for uk in users:
                w = out.rx.combiners[uk]
                sig = np.linalg.norm(
                    w @ drop.h(uk, uk) @ out.tx.precoders[(uk, uk)]) ** 2
                leak = sum(
                    np.linalg.norm(
                        w @ drop.h(uk, uj) @ out.tx.precoders[(uj, uj)]) ** 2
                    for uj in users if uj != uk)
                assert leak / sig < 1e-8

    def test_no_cross_interference_keeps_matched_filter_start(self):
        cfg = cluster_cfg(alpha=0.0, num_drops=1)
        drop = generate_drop(cfg, 3, snr_db=15.0)
        out = ia(drop, cfg)
        assert out.aux["max_rel_leakage"] == 0.0
        assert out.aux["leakage_sweeps"] == 0
        for u in range(3):
            _, _, vh = np.linalg.svd(drop.h(u, u))
            matched = vh[0].conj()
            got = out.tx.precoders[(u, u)][:, 0]
            assert abs(abs(matched.conj() @ got) - 1.0) < 1e-12

    def test_infeasible_shape_raises(self):
        cfg = cluster_cfg(antennas_bs=2, antennas_mt=2, num_drops=1)
        drop = generate_drop(cfg, 0, snr_db=15.0)
        with pytest.raises(InfeasibleConfiguration):
            ia(drop, cfg, num_streams=2)

    def test_iteration_accounting_and_power(self):
        cfg = cluster_cfg(num_drops=1)
        drop = generate_drop(cfg, 7, snr_db=15.0)
        out = ia(drop, cfg)
        assert out.iterations_used == 0
        assert out.objective_trace == []
        check_tx_strategy(out.tx, cfg)
        check_rx_strategy(out.rx)
        for u in range(3):
            assert out.tx.per_stream_powers[(u, 0)] == cfg.power_budget_per_bs


class TestMaxSinr:
    def test_single_bs_reaches_dominant_singular_mode(self):
        cfg = cluster_cfg(num_bs=1, mts_per_bs=(1,), alpha=0.0, beta=0.0,
                          num_drops=1, max_iterations=30)
        drop = generate_drop(cfg, 11, snr_db=15.0)
        out = max_sinr(drop, cfg)
        s1 = np.linalg.svd(drop.h(0, 0), compute_uv=False)[0]
        target = s1**2 * cfg.power_budget_per_bs / drop.noise_var
        w = out.rx.combiners[0][0]
        v = out.tx.precoders[(0, 0)][:, 0]
        p = out.tx.per_stream_powers[(0, 0)]
        achieved = p * abs(w @ drop.h(0, 0) @ v) ** 2 / (
            drop.noise_var * np.linalg.norm(w) ** 2)
        assert achieved == pytest.approx(target, rel=1e-6)

    def test_beats_ia_at_low_snr_on_most_drops(self):
        cfg = cluster_cfg(snr_db_grid=(10.0,), num_drops=200)
        wins = 0
        for i in range(cfg.num_drops):
            drop = generate_drop(cfg, i, snr_db=10.0)
            oci = oci_covariance(cfg, drop)
            r_ms = scheme_sum_rate(max_sinr(drop, cfg, oci), drop, cfg, oci)
            r_ia = scheme_sum_rate(ia(drop, cfg, oci), drop, cfg, oci)
            wins += r_ms >= r_ia - 1e-9
        assert wins / cfg.num_drops >= 0.90

    def test_zero_iteration_budget_returns_initialization(self):
        cfg = cluster_cfg(max_iterations=0, num_drops=1)
        drop = generate_drop(cfg, 2, snr_db=15.0)
        out = max_sinr(drop, cfg)
        assert out.iterations_used == 0
        assert out.objective_trace == []
        for u in range(3):
            _, _, vh = np.linalg.svd(drop.h(u, u))
            init = vh[0].conj()
            got = out.tx.precoders[(u, u)][:, 0]
            assert abs(abs(init.conj() @ got) - 1.0) < 1e-12

    def test_equal_power_per_stream(self):
        cfg = cluster_cfg(num_drops=1)
        drop = generate_drop(cfg, 5, snr_db=15.0)
        out = max_sinr(drop, cfg)
        powers = set(out.tx.per_stream_powers.values())
        assert len(powers) == 1
        check_tx_strategy(out.tx, cfg)


class TestWmmse:
    def test_single_link_matches_waterfilling(self):
        cfg = cluster_cfg(num_bs=1, mts_per_bs=(1,), alpha=0.0, beta=0.0,
                          num_drops=1, max_iterations=100)
        drop = generate_drop(cfg, 21, snr_db=15.0)
        oci = oci_covariance(cfg, drop)
        out = wmmse(drop, cfg, oci)
        s = np.linalg.svd(drop.h(0, 0), compute_uv=False)
        wf = waterfill(s**2 / drop.noise_var, cfg.power_budget_per_bs)
        oracle = float(np.sum(np.log2(1.0 + wf.powers * s**2 / drop.noise_var)))
        rate = scheme_sum_rate(out, drop, cfg, oci)
        assert rate == pytest.approx(oracle, abs=1e-4)

    def test_surrogate_objective_non_increasing(self):
        cfg = cluster_cfg(num_drops=20)
        for i in range(cfg.num_drops):
            drop = generate_drop(cfg, i, snr_db=15.0)
            out = wmmse(drop, cfg)
            trace = np.array(out.objective_trace)
            assert trace.size == out.iterations_used
            assert np.all(np.diff(trace) <= 1e-9)

    def test_stream_shutdown_occurs(self):
        # transmit-covariance eigenvalues below 1e-6 of the budget are
        # dropped; at least some drops must end with fewer than min(N, M)
        # streams on some link
        cfg = cluster_cfg(num_drops=1000)
        shutdowns = 0
        for i in range(cfg.num_drops):
            drop = generate_drop(cfg, i, snr_db=15.0)
            out = wmmse(drop, cfg)
            if any(c < min(cfg.antennas_bs, cfg.antennas_mt)
                   for c in out.tx.stream_counts.values()):
                shutdowns += 1
        assert shutdowns > 0

    def test_final_rate_beats_initialization_on_most_drops(self):
        cfg = cluster_cfg(num_drops=100)
        d0 = min(cfg.antennas_bs, cfg.antennas_mt)
        p0 = cfg.power_budget_per_bs / d0
        better = 0
        for i in range(cfg.num_drops):
            drop = generate_drop(cfg, i, snr_db=15.0)
            oci = oci_covariance(cfg, drop)
            init_tx = TxStrategy(
                precoders={
                    (u, u): np.linalg.svd(drop.h(u, u))[2][:d0].conj().T
                    for u in range(3)
                },
                stream_counts={u: d0 for u in range(3)},
                per_stream_powers={(u, l): p0 for u in range(3) for l in range(d0)},
            )
            init_out = SchemeOutput(
                tx=init_tx, rx=irc_receivers(drop, cfg, init_tx, oci),
                iterations_used=0, converged=True, objective_trace=[])
            r_init = scheme_sum_rate(init_out, drop, cfg, oci)
            r_final = scheme_sum_rate(wmmse(drop, cfg, oci), drop, cfg, oci)
            better += r_final >= r_init - 1e-9
        assert better / cfg.num_drops >= 0.95


class TestReconfigurable:
    def test_no_interference_equals_full_reuse_exactly(self):
        cfg = cluster_cfg(alpha=0.0, beta=0.0, num_drops=5)
        for i in range(cfg.num_drops):
            drop = generate_drop(cfg, i, snr_db=10.0)
            oci = oci_covariance(cfg, drop)
            out_r = reconfigurable(drop, cfg, oci)
            out_f = baseline_full_reuse_su(drop, cfg, oci)
            assert set(out_r.tx.precoders) == set(out_f.tx.precoders)
            for key in out_f.tx.precoders:
                np.testing.assert_allclose(
                    out_r.tx.precoders[key], out_f.tx.precoders[key],
                    atol=1e-10)
            assert out_r.tx.stream_counts == out_f.tx.stream_counts
            for key, pw in out_f.tx.per_stream_powers.items():
                assert out_r.tx.per_stream_powers[key] == pytest.approx(
                    pw, abs=1e-10)
            assert out_r.aux["d_b"] == out_f.tx.stream_counts

    def test_explicit_stream_counts_cover_both_ranks(self):
        cfg = cluster_cfg(num_drops=100)
        seen = set()
        for i in range(cfg.num_drops):
            drop = generate_drop(cfg, i, snr_db=15.0)
            out = reconfigurable(drop, cfg)
            for u, d_b in out.aux["d_b"].items():
                assert isinstance(d_b, int)
                assert d_b == out.tx.stream_counts[u]
                assert d_b in (1, 2)
                seen.add(d_b)
        assert seen == {1, 2}

    def test_trace_stabilizes_on_most_drops(self):
        cfg = cluster_cfg(num_drops=100)
        stable = 0
        for i in range(cfg.num_drops):
            drop = generate_drop(cfg, i, snr_db=15.0)
            trace = reconfigurable(drop, cfg).objective_trace
            if len(trace) >= 2 and abs(trace[-1] - trace[-2]) < 0.05 * max(
                    1.0, abs(trace[-2])):
                stable += 1
        assert stable / cfg.num_drops >= 0.70

    def test_dominates_ia_and_eigenbeams_at_low_snr(self):
        cfg = cluster_cfg(snr_db_grid=(10.0,), num_drops=100)
        over_ia = over_su = 0
        for i in range(cfg.num_drops):
            drop = generate_drop(cfg, i, snr_db=10.0)
            oci = oci_covariance(cfg, drop)
            r_rec = scheme_sum_rate(reconfigurable(drop, cfg, oci), drop, cfg, oci)
            r_ia = scheme_sum_rate(ia(drop, cfg, oci), drop, cfg, oci)
            r_su = scheme_sum_rate(
                baseline_full_reuse_su(drop, cfg, oci), drop, cfg, oci)
            over_ia += r_rec >= r_ia - 1e-9
            over_su += r_rec >= r_su - 1e-9
        assert over_ia / cfg.num_drops >= 0.80
        assert over_su / cfg.num_drops >= 0.80

    def test_power_and_iteration_accounting(self):
        cfg = cluster_cfg(num_drops=3, beta=0.25)
        for i in range(cfg.num_drops):
            drop = generate_drop(cfg, i, snr_db=15.0)
            out = reconfigurable(drop, cfg)
            check_tx_strategy(out.tx, cfg)
            check_rx_strategy(out.rx)
            assert out.iterations_used <= cfg.max_iterations
            assert len(out.objective_trace) == out.iterations_used


class TestFullReuse:
    def test_precoders_ignore_coupling_parameters(self):
        cfg_hot = cluster_cfg(alpha=1.0, beta=0.0, num_drops=1)
        cfg_mild = cluster_cfg(alpha=0.25, beta=0.25, num_drops=1)
        drop_hot = generate_drop(cfg_hot, 9, snr_db=15.0)
        drop_mild = generate_drop(cfg_mild, 9, snr_db=15.0)
        out_hot = baseline_full_reuse_su(drop_hot, cfg_hot)
        out_mild = baseline_full_reuse_su(drop_mild, cfg_mild)
        assert set(out_hot.tx.precoders) == set(out_mild.tx.precoders)
        for key in out_hot.tx.precoders:
            np.testing.assert_allclose(
                out_hot.tx.precoders[key], out_mild.tx.precoders[key],
                atol=1e-12)

    def test_loses_to_ia_at_high_snr_on_most_drops(self):
        cfg = cluster_cfg(snr_db_grid=(20.0,), num_drops=200)
        losses = 0
        for i in range(cfg.num_drops):
            drop = generate_drop(cfg, i, snr_db=20.0)
            oci = oci_covariance(cfg, drop)
            r_fr = scheme_sum_rate(
                baseline_full_reuse_su(drop, cfg, oci), drop, cfg, oci)
            r_ia = scheme_sum_rate(ia(drop, cfg, oci), drop, cfg, oci)
            losses += r_fr <= r_ia + 1e-9
        assert losses / cfg.num_drops >= 0.90


class TestOrthogonal:
    def test_two_cell_no_coupling_gives_exactly_half_full_reuse(self):
        cfg = cluster_cfg(num_bs=2, mts_per_bs=(1, 1), alpha=0.0, beta=0.0,
                          num_drops=5)
        for i in range(cfg.num_drops):
            drop = generate_drop(cfg, i, snr_db=15.0)
            oci = oci_covariance(cfg, drop)
            r_orth = per_mt_rates(
                drop, cfg, baseline_orthogonal_su(drop, cfg, oci), oci)
            r_full = per_mt_rates(
                drop, cfg, baseline_full_reuse_su(drop, cfg, oci), oci)
            np.testing.assert_allclose(r_orth, 0.5 * r_full, rtol=1e-12)

    def test_rate_independent_of_coupling(self):
        cfg_hot = cluster_cfg(alpha=1.0, beta=0.25, num_drops=1)
        cfg_mild = cluster_cfg(alpha=0.25, beta=0.25, num_drops=1)
        drop_hot = generate_drop(cfg_hot, 13, snr_db=15.0)
        drop_mild = generate_drop(cfg_mild, 13, snr_db=15.0)
        r_hot = per_mt_rates(
            drop_hot, cfg_hot,
            baseline_orthogonal_su(drop_hot, cfg_hot),
            oci_covariance(cfg_hot, drop_hot))
        r_mild = per_mt_rates(
            drop_mild, cfg_mild,
            baseline_orthogonal_su(drop_mild, cfg_mild),
            oci_covariance(cfg_mild, drop_mild))
        np.testing.assert_allclose(r_hot, r_mild, rtol=1e-12)

    def test_reuse_accounting_flags(self):
        cfg = cluster_cfg(num_drops=1)
        drop = generate_drop(cfg, 0, snr_db=15.0)
        out = baseline_orthogonal_su(drop, cfg)
        assert out.prelog == pytest.approx(1.0 / cfg.num_bs)
        assert out.exclude_ici
        assert out.exclude_oci


class TestSchemeContracts:
    def test_power_constraints_hold_for_every_scheme(self):
        cfg = cluster_cfg(alpha=0.7, beta=0.25, num_drops=4)
        schemes = (ia, max_sinr, wmmse, reconfigurable,
                   baseline_full_reuse_su, baseline_orthogonal_su)
        for i in range(cfg.num_drops):
            drop = generate_drop(cfg, i, snr_db=12.5)
            oci = oci_covariance(cfg, drop)
            for scheme in schemes:
                out = scheme(drop, cfg, oci)
                check_tx_strategy(out.tx, cfg)
                assert out.iterations_used <= cfg.max_iterations
                assert len(out.objective_trace) == out.iterations_used

    def test_mean_rate_ordering_in_the_strong_coupling_scenario(self):
        # at 15 dB with full intra-cluster coupling: the three
        # interference-aware schemes all beat ia, and ia beats the
        # orthogonal split
        cfg = cluster_cfg(num_drops=1000, rng_seed=12345)
        res = monte_carlo(
            cfg, ["ia", "max_sinr", "wmmse", "reconfigurable", "orthogonal"])
        means = {s: res[s][15.0].cluster_sum for s in res}
        assert means["max_sinr"] >= means["ia"]
        assert means["wmmse"] >= means["ia"]
        assert means["reconfigurable"] >= means["ia"]
        assert means["ia"] >= means["orthogonal"]
