"""Plain-text reports behind the ``frontend`` and ``analyze`` subcommands."""

from __future__ import annotations

import math

import numpy as np

from .config import Config
from .rates import (
    MMIMO,
    MRC,
    RAQ,
    ZF,
    BoundInputs,
    asymptotic_limits,
    gap_raq_vs_mmimo,
    gap_zf_vs_mrc,
    lower_bound_per_user,
)


def _fmt(value, unit="") -> str:
    if value is None:
        return "undefined"
    if isinstance(value, complex):
        return f"{value:.6g}"
    return f"{value:.6g}{(' ' + unit) if unit else ''}"


def frontend_report(config: Config) -> str:
    """Table of the per-element model and the conventional baseline."""
    fe = config.raq_frontend()
    mm = config.mmimo_frontend()
    eff = fe.effective_gain
    lines = [
        "atomic receiver element",
        f"  gain rho                 {_fmt(fe.gain)}",
        f"  element phase Phi_1      {_fmt(fe.element_phase)}",
        f"  |Phi_1|                  {_fmt(abs(fe.element_phase))}",
        f"  readout slope kappa      {_fmt(fe.kappa, '1/V')}",
        f"  slope phase psi          {_fmt(fe.psi, 'rad')}",
        f"  composite phase phi      {_fmt(fe.phi, 'rad')}",
        f"  effective gain rho*cos^2 {_fmt(eff)}",
        f"  optical gain K           {_fmt(fe.k_gain)}",
        f"  probe power out          {_fmt(fe.probe_out_power, 'W')}",
        f"  noise power sigma^2      {_fmt(fe.noise_power, 'W')}",
        f"  aperture A_e             {_fmt(fe.aperture, 'm^2')}",
        "conventional baseline",
        f"  gain rho_0               {_fmt(mm.gain)}",
        f"  aperture A_0             {_fmt(mm.aperture, 'm^2')}",
        f"  noise power              {_fmt(mm.noise_power, 'W')}",
    ]
    if fe.noise_power:
        ratio = (eff / mm.gain) * (fe.aperture / mm.aperture) \
            * (mm.noise_power / fe.noise_power)
        lines.append("comparison")
        lines.append(f"  SINR ratio (ZF)          {_fmt(ratio)}")
        lines.append(f"  rate gap                 {_fmt(math.log2(ratio), 'bit/s/Hz')}")
    return "\n".join(lines)


def _bound_inputs(config: Config, system: str, scheme: str,
                  beta: np.ndarray) -> BoundInputs:
    if system == RAQ:
        fe = config.raq_frontend()
        gain, aperture, noise = fe.effective_gain, fe.aperture, fe.noise_power
    else:
        mm = config.mmimo_frontend()
        gain, aperture, noise = mm.gain, mm.aperture, mm.noise_power
    return BoundInputs(
        system=system, scheme=scheme, m_elements=config.m_elements,
        beta=beta, transmit_power=config.transmit_power_w,
        aperture=aperture, gain=gain, noise_power=noise,
    )


def analyze_report(config: Config) -> str:
    """Closed-form bounds, asymptotic limits and gap terms for the config."""
    _, profile = config.user_profile()
    beta = profile.beta
    k_users = beta.size
    m = config.m_elements
    inputs = {
        (system, scheme): _bound_inputs(config, system, scheme, beta)
        for system in (RAQ, MMIMO) for scheme in (MRC, ZF)
    }
    bounds = {key: lower_bound_per_user(val) for key, val in inputs.items()}
    lines = [
        f"deployment: M={m}, K={k_users}, "
        f"P_s={config.raw['users']['transmit_power_dbm']:g} dBm, "
        f"seed={config.master_seed}",
        "",
        "per-user closed-form lower bounds (bit/s/Hz)",
        "  user  beta_dB   raq_mrc   raq_zf    mmimo_mrc mmimo_zf  c1",
    ]
    c1 = np.array([
        asymptotic_limits(inputs[(RAQ, MRC)], k, "interference")
        for k in range(k_users)
    ]) if k_users >= 2 else np.full(k_users, math.nan)
    for k in range(k_users):
        lines.append(
            f"  {k:4d}  {10 * math.log10(beta[k]):8.2f}"
            f"  {bounds[(RAQ, MRC)][k]:8.3f}  {bounds[(RAQ, ZF)][k]:8.3f}"
            f"  {bounds[(MMIMO, MRC)][k]:8.3f}  {bounds[(MMIMO, ZF)][k]:8.3f}"
            f"  {c1[k]:6.3f}"
        )
    lines.append("")
    lines.append("user means (bit/s/Hz)")
    for key, value in bounds.items():
        lines.append(f"  {key[0]}-{key[1]:<4s} {value.mean():8.3f}")
    if k_users >= 2:
        lines.append(f"  saturation (interference-limited) {c1.mean():8.3f}")
    budget = config.energy_budget_w
    c3_raq = asymptotic_limits(inputs[(RAQ, ZF)], 0, "scaled-power", budget)
    c3_mm = asymptotic_limits(inputs[(MMIMO, ZF)], 0, "scaled-power", budget)
    lines.append("")
    lines.append(f"scaled-power limits (user 0, energy budget {budget:g} W)")
    lines.append(f"  raq    {c3_raq:8.3f}")
    lines.append(f"  mmimo  {c3_mm:8.3f}")
    if m > k_users >= 2:
        gaps = [gap_zf_vs_mrc(inputs[(RAQ, ZF)], k) for k in range(k_users)]
        mean_dr = float(np.mean([g.delta_r_k for g in gaps]))
        lines.append("")
        lines.append("scheme comparison (ZF over saturated MRC, atomic receiver)")
        lines.append(f"  mean delta_R_k   {mean_dr:8.3f} bit/s/Hz")
        lines.append(f"  finite-array term {gaps[0].delta_r:+8.4f} bit/s/Hz")
        lines.append(f"  mean SINR ratio  {np.mean([g.ratio1 for g in gaps]):.6g}")
    system_gap = gap_raq_vs_mmimo(inputs[(RAQ, ZF)], inputs[(MMIMO, ZF)], 0)
    lines.append("")
    lines.append("system comparison (atomic over conventional, ZF)")
    lines.append(f"  SINR ratio       {system_gap.ratio2:.6g}")
    lines.append(f"  rate gap         {system_gap.delta_r_tilde_k:8.3f} bit/s/Hz")
    return "\n".join(lines)
