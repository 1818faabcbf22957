"""Switching decisions and hybrid CDF algebra."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skyhaul.channels import Detection
from skyhaul.switching import (
    HardPolicy,
    SoftPolicy,
    SwitchDecision,
    fso_soft_cdf,
    hybrid_cdf_hard,
    hybrid_cdf_soft,
    select_hard,
    select_soft,
)
from skyhaul.units import db_to_linear

from test_channels import default_thz, strong_fso


class TestSelectHard:
    def test_fso_priority(self):
        assert select_hard(HardPolicy(1.0), 2.0, 0.0) is SwitchDecision.FSO

    def test_thz_boundary_counts_active(self):
        assert select_hard(HardPolicy(1.0), 0.5, 1.0) is SwitchDecision.THZ

    def test_outage(self):
        assert select_hard(HardPolicy(1.0), 0.5, 0.5) is SwitchDecision.OUTAGE

    @given(
        th=st.floats(0.01, 100.0),
        go=st.floats(0.0, 1000.0),
        gt=st.floats(0.0, 1000.0),
        c=st.floats(0.001, 1000.0),
    )
    @settings(max_examples=200, deadline=None)
    def test_scale_invariance(self, th, go, gt, c):
        base = select_hard(HardPolicy(th), go, gt)
        scaled = select_hard(HardPolicy(th * c), go * c, gt * c)
        assert base is scaled


class TestSelectSoft:
    POLICY = SoftPolicy(th_upper=10.0, th_lower=2.0, th_thz=5.0)

    def test_reacquire_fso(self):
        assert (
            select_soft(self.POLICY, SwitchDecision.THZ, 12.0, 0.0)
            is SwitchDecision.FSO
        )

    def test_hysteresis_band_keeps_fso(self):
        assert (
            select_soft(self.POLICY, SwitchDecision.FSO, 5.0, 0.0)
            is SwitchDecision.FSO
        )

    def test_hysteresis_band_keeps_thz_branch(self):
        assert (
            select_soft(self.POLICY, SwitchDecision.THZ, 5.0, 6.0)
            is SwitchDecision.THZ
        )

    def test_drop_to_outage(self):
        assert (
            select_soft(self.POLICY, SwitchDecision.THZ, 1.0, 4.0)
            is SwitchDecision.OUTAGE
        )

    def test_outage_resides_on_thz_branch(self):
        # after OUTAGE, a mid-band FSO level does not return to FSO
        assert (
            select_soft(self.POLICY, SwitchDecision.OUTAGE, 5.0, 6.0)
            is SwitchDecision.THZ
        )

    def test_threshold_ordering_enforced(self):
        with pytest.raises(Exception):
            SoftPolicy(th_upper=2.0, th_lower=5.0, th_thz=1.0)


class TestHybridCdfs:
    def test_hard_is_product(self):
        m, t = strong_fso(), default_thz()
        pol = HardPolicy(db_to_linear(20.0))
        from skyhaul.channels import malaga_cdf, thz_cdf

        expected = malaga_cdf(m, pol.gamma_th) * thz_cdf(t, pol.gamma_th)
        assert hybrid_cdf_hard(m, t, pol) == pytest.approx(expected, rel=1e-12)

    def test_hard_limits(self):
        m, t = strong_fso(), default_thz()
        assert hybrid_cdf_hard(m, t, HardPolicy(1e-12)) == pytest.approx(0.0, abs=1e-9)
        assert hybrid_cdf_hard(m, t, HardPolicy(1e12)) == pytest.approx(1.0, abs=1e-6)

    @given(
        f_l=st.floats(0.0, 1.0),
        gap=st.floats(0.0, 1.0),
    )
    @settings(max_examples=300, deadline=None)
    def test_soft_cdf_algebraic_identity(self, f_l, gap):
        # printed form == F(l)/(1 + F(l) - F(u)) for any 0<=F(l)<=F(u)<=1
        # (the degenerate F(l)=0, F(u)=1 corner divides by zero in both and
        # cannot occur for a continuous CDF at finite thresholds)
        f_u = min(1.0, f_l + gap * (1.0 - f_l))
        denom = f_l - f_u + 1.0
        if denom < 1e-9:
            return
        printed = f_l + f_l * (f_u - f_l) / denom
        simplified = f_l / (1.0 + f_l - f_u)
        assert printed == pytest.approx(simplified, abs=1e-14)

    def test_soft_cdf_simplified_equivalence_on_channel(self):
        from skyhaul.channels import malaga_cdf

        m = strong_fso(snr_db=25.0)
        pol = SoftPolicy(
            th_upper=db_to_linear(25.0),
            th_lower=db_to_linear(15.0),
            th_thz=db_to_linear(20.0),
        )
        f_l = malaga_cdf(m, pol.th_lower)
        f_u = malaga_cdf(m, pol.th_upper)
        assert fso_soft_cdf(m, pol) == pytest.approx(
            f_l / (1.0 + f_l - f_u), rel=1e-14
        )

    def test_soft_collapses_to_hard(self):
        # th_lower = th_upper is rejected by the policy, so approach the
        # collapse with an epsilon band and compare against hard switching
        m, t = strong_fso(snr_db=25.0), default_thz()
        th = db_to_linear(20.0)
        soft = SoftPolicy(th_upper=th * (1 + 1e-12), th_lower=th, th_thz=th)
        hard = HardPolicy(th)
        assert hybrid_cdf_soft(m, t, soft) == pytest.approx(
            hybrid_cdf_hard(m, t, hard), rel=1e-10
        )

    def test_soft_leq_hard_when_band_straddles(self):
        m, t = strong_fso(snr_db=25.0), default_thz()
        th = db_to_linear(20.0)
        soft = SoftPolicy(
            th_upper=db_to_linear(25.0), th_lower=db_to_linear(15.0), th_thz=th
        )
        assert hybrid_cdf_soft(m, t, soft) <= hybrid_cdf_hard(m, t, HardPolicy(th))

    def test_im_dd_variant(self):
        m = strong_fso(mode=Detection.IM_DD, snr_db=30.0)
        t = default_thz()
        val = hybrid_cdf_hard(m, t, HardPolicy(db_to_linear(15.0)))
        assert 0.0 <= val <= 1.0
