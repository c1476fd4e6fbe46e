"""Achievable two-way rates of four relaying schemes.

Each scheme moves one data packet A->C and one C->A through the relay B and
is scored by its two-way rate: total delivered bits divided by the total
number of channel symbols spent, counting simultaneous transmissions once.

* DF: three-step decode-and-forward with network coding at the relay.  The
  relay re-bins both packets against the direct-link side information, XORs
  the binned packets (splitting or padding to equalize their lengths) and
  broadcasts at the rate of the weaker downlink.
* AF: two-step amplify-and-forward.  The relay scales and re-transmits the
  sum signal; each terminal cancels its own contribution.
* JDF: two-step joint decode-and-forward.  Both terminals transmit
  simultaneously at a point of the multiple-access region; the relay decodes
  both packets and broadcasts their XOR.
* DNF: denoise-and-forward, reported as its upper bound, the capacity of
  the weaker terminal-relay link.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .channel import LinkConfig, RatePair, capacity, ma_rate_pair


@dataclass(frozen=True)
class DfBreakdown:
    """Intermediate quantities of the three-step DF scheme.

    Packet sizes are normalized to a unit-length source phase (N = 1);
    the two-way rate does not depend on N.  ``size_dbc`` is the binned
    relay-to-C packet, ``size_dba`` the binned relay-to-A packet, both in
    bits.  ``case`` records how the relay equalized the two packets:
    ``"split-and-xor"`` when the C-bound packet is at least as long
    (its excess is sent separately at the stronger-link rate), otherwise
    ``"pad-and-xor"``.
    """

    theta: float
    size_dbc: float
    size_dba: float
    duration: float
    rate: float
    case: str


@dataclass(frozen=True)
class AfBreakdown:
    """Effective end-to-end SNRs of the two-step AF scheme."""

    amplification: float
    snr_a_to_c: float
    snr_c_to_a: float
    rate_pair: RatePair


@dataclass(frozen=True)
class JdfBreakdown:
    """Intermediate quantities of the two-step JDF scheme at one lambda."""

    lam: float
    rate_pair: RatePair
    lambda0: Optional[float]
    duration: float
    rate: float
    regime: str  # "crossing" or "saturated"


@dataclass(frozen=True)
class SchemeRate:
    """A scheme's best two-way rate with its optimizing parameter.

    ``rate`` always comes from the scheme's closed-form maximum; the
    attached ``breakdown`` re-derives the same value through the generic
    per-parameter rate function, so the two paths can be cross-checked.
    ``upper_bound`` marks rates that bound the scheme from above rather
    than being constructively achieved (only DNF).
    """

    scheme: str
    rate: float
    parameter: Optional[float] = None
    breakdown: object = None
    upper_bound: bool = False


def _check_theta(theta: float) -> None:
    if not (isinstance(theta, (int, float)) and math.isfinite(theta)):
        raise ValueError(f"theta must be a finite number, got {theta!r}")
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta must lie strictly inside (0, 1), got {theta!r}")


def df_packet_sizes(config: LinkConfig, theta: float, n_symbols: float) -> tuple[float, float]:
    """Binned packet sizes (|D_BC|, |D_BA|) of the DF relay, in bits.

    During the first ``(1-theta)*N`` symbols A transmits at the A-relay
    capacity, during the next ``theta*N`` symbols C does likewise.  The
    relay re-bins each decoded packet against what the opposite terminal
    already overheard on the direct link, leaving

        |D_BC| = N*(1-theta)*(C(gamma1) - C(gamma0))
        |D_BA| = N*theta*(C(gamma2) - C(gamma0))
    """
    _check_theta(theta)
    if n_symbols <= 0:
        raise ValueError(f"n_symbols must be positive, got {n_symbols!r}")
    c0 = capacity(config.gamma0)
    size_dbc = n_symbols * (1.0 - theta) * (capacity(config.gamma1) - c0)
    size_dba = n_symbols * theta * (capacity(config.gamma2) - c0)
    return size_dbc, size_dba


def df_rate(config: LinkConfig, theta: float) -> DfBreakdown:
    """Two-way rate of the three-step DF scheme at a given time split.

    The source phases take one unit of time between them.  The broadcast
    phase sends the XOR of the (length-equalized) binned packets at the
    weaker-link rate; in the split case the excess of the longer C-bound
    packet goes out separately at the stronger-link rate.
    """
    size_dbc, size_dba = df_packet_sizes(config, theta, 1.0)
    c1 = capacity(config.gamma1)
    c2 = capacity(config.gamma2)
    if size_dbc >= size_dba:
        case = "split-and-xor"
        duration = 1.0 + size_dba / c1 + (size_dbc - size_dba) / c2
    else:
        case = "pad-and-xor"
        duration = 1.0 + size_dba / c1
    delivered = (1.0 - theta) * c1 + theta * c2  # source-phase bits, N = 1
    return DfBreakdown(
        theta=theta,
        size_dbc=size_dbc,
        size_dba=size_dba,
        duration=duration,
        rate=delivered / duration,
        case=case,
    )


def df_theta_star(config: LinkConfig) -> float:
    """Optimal DF time split; equalizes the two binned packet sizes."""
    c0 = capacity(config.gamma0)
    c1 = capacity(config.gamma1)
    c2 = capacity(config.gamma2)
    return (c1 - c0) / (c1 + c2 - 2.0 * c0)


def df_max_rate(config: LinkConfig) -> SchemeRate:
    """Maximal two-way DF rate, in closed form.

    With delta = (C(g1) - C(g0)) / (C(g1) * (C(g1) + C(g2) - 2*C(g0))):

        rate = C(g1) * (1 + delta*(C(g2) - C(g1))) / (1 + delta*(C(g2) - C(g0)))

    which equals ``df_rate(config, df_theta_star(config)).rate``.
    """
    c0 = capacity(config.gamma0)
    c1 = capacity(config.gamma1)
    c2 = capacity(config.gamma2)
    delta = (c1 - c0) / (c1 * (c1 + c2 - 2.0 * c0))
    rate = c1 * (1.0 + delta * (c2 - c1)) / (1.0 + delta * (c2 - c0))
    theta = df_theta_star(config)
    return SchemeRate("DF", rate=rate, parameter=theta, breakdown=df_rate(config, theta))


def df_max_rate_no_direct(config: LinkConfig) -> SchemeRate:
    """Maximal DF rate when the direct link is ignored (gamma0 = 0).

        rate = 2*C(g1)*C(g2) / (C(g1) + 2*C(g2))

    Matches :func:`df_max_rate` on configs whose ``gamma0`` is zero.
    """
    c1 = capacity(config.gamma1)
    c2 = capacity(config.gamma2)
    rate = 2.0 * c1 * c2 / (c1 + 2.0 * c2)
    theta = c1 / (c1 + c2)  # theta_star at gamma0 = 0
    zeroed = LinkConfig(
        gamma0=0.0,
        gamma1=config.gamma1,
        gamma2=config.gamma2,
        noise_power=config.noise_power,
        swapped=config.swapped,
    )
    return SchemeRate("DF", rate=rate, parameter=theta, breakdown=df_rate(zeroed, theta))


def af_breakdown(config: LinkConfig) -> AfBreakdown:
    """Effective SNRs of amplify-and-forward relaying.

    The relay scales its received sum signal to unit average power with
    ``beta = 1/sqrt(|h1|^2 + |h2|^2 + N0)`` where ``|h_i|^2 = gamma_i*N0``.
    After each terminal subtracts its own (known) contribution the
    end-to-end SNRs collapse to

        snr_a_to_c = g1*g2 / (g1 + 2*g2 + 1)
        snr_c_to_a = g1*g2 / (2*g1 + g2 + 1)
    """
    g1, g2, n0 = config.gamma1, config.gamma2, config.noise_power
    amplification = 1.0 / math.sqrt(n0 * (g1 + g2 + 1.0))
    snr_a_to_c = g1 * g2 / (g1 + 2.0 * g2 + 1.0)
    snr_c_to_a = g1 * g2 / (2.0 * g1 + g2 + 1.0)
    return AfBreakdown(
        amplification=amplification,
        snr_a_to_c=snr_a_to_c,
        snr_c_to_a=snr_c_to_a,
        rate_pair=RatePair(rate_a=capacity(snr_a_to_c), rate_c=capacity(snr_c_to_a)),
    )


def af_rate(config: LinkConfig) -> SchemeRate:
    """Maximal two-way AF rate: both directions complete in two steps.

    Each direction delivers N*C(snr) bits over the 2N symbols of the two
    steps, so the two-way rate is the plain average of the two capacities.
    """
    bd = af_breakdown(config)
    rate = 0.5 * (bd.rate_pair.rate_a + bd.rate_pair.rate_c)
    return SchemeRate("AF", rate=rate, parameter=None, breakdown=bd)


def _jdf_has_crossing(config: LinkConfig) -> bool:
    # rate_c(lam) meets C(g1) inside [0, 1] iff g2 <= g1 + g1^2;
    # beyond that even the A-favouring corner keeps rate_c above C(g1)
    return config.gamma2 <= config.gamma1 + config.gamma1 ** 2


def jdf_lambda0(config: LinkConfig) -> Optional[float]:
    """Time-share weight where the two uplink rates balance.

    At this point both terminals load ``C(gamma1 + gamma2) / 2``, so the
    relay's XOR packet covers the traffic in both directions with nothing
    left over.  Returns None when the balance point falls outside [0, 1],
    i.e. when ``gamma2 > gamma1 + gamma1**2`` (the A-favouring corner then
    still leaves the C-bound packet longer).
    """
    if not _jdf_has_crossing(config):
        return None
    c1 = capacity(config.gamma1)
    c2 = capacity(config.gamma2)
    c12 = capacity(config.gamma1 + config.gamma2)
    lam = (2.0 * c2 - c12) / (2.0 * c1 + 2.0 * c2 - 2.0 * c12)
    # lam lies in [0, 1] whenever the crossing test passes; rounding can
    # push it an ulp past an endpoint, which downstream domain checks reject
    return min(1.0, max(0.0, lam))


def jdf_rate(config: LinkConfig, lam: float) -> JdfBreakdown:
    """Two-way rate of the two-step JDF scheme at a given time share.

    Terminals load the multiple-access point ``ma_rate_pair(config, lam)``
    during a unit-length joint source phase.  The relay XORs the two
    decoded packets (padding the shorter one) and broadcasts at the
    weaker-link rate; when the A-bound packet is longer its excess goes
    out separately at the stronger-link rate.
    """
    pair = ma_rate_pair(config, lam)
    c1 = capacity(config.gamma1)
    c2 = capacity(config.gamma2)
    c12 = capacity(config.gamma1 + config.gamma2)
    if pair.rate_c >= pair.rate_a:
        duration = 1.0 + pair.rate_c / c1
    else:
        duration = 1.0 + pair.rate_c / c1 + (pair.rate_a - pair.rate_c) / c2
    # pair.rate_a + pair.rate_c == c12 on the dominant face
    rate = c12 / duration
    return JdfBreakdown(
        lam=lam,
        rate_pair=pair,
        lambda0=jdf_lambda0(config),
        duration=duration,
        rate=rate,
        regime="crossing" if _jdf_has_crossing(config) else "saturated",
    )


def jdf_max_rate(config: LinkConfig) -> SchemeRate:
    """Maximal two-way JDF rate, in closed form.

    In the crossing regime (``gamma2 <= gamma1 + gamma1**2``) the optimum
    sits at ``lambda0`` where the two uplink loads balance:

        rate = C(g1) * 2*C(g1+g2) / (2*C(g1) + C(g1+g2))

    Otherwise the rate saturates at C(gamma1), reached at ``lam = 1``.
    """
    c1 = capacity(config.gamma1)
    c12 = capacity(config.gamma1 + config.gamma2)
    if _jdf_has_crossing(config):
        lam = jdf_lambda0(config)
        rate = c1 * 2.0 * c12 / (2.0 * c1 + c12)
    else:
        lam = 1.0
        rate = c1
    return SchemeRate("JDF", rate=rate, parameter=lam, breakdown=jdf_rate(config, lam))


def dnf_upper_bound(config: LinkConfig) -> SchemeRate:
    """Upper bound on the two-way DNF rate: the weaker-link capacity.

    Both steps take N symbols each and each direction can deliver at most
    N*C(gamma1) bits, so the two-way rate is bounded by C(gamma1).  The
    bound is tight at high SNR but not constructive, hence
    ``upper_bound=True``.
    """
    return SchemeRate(
        "DNF",
        rate=capacity(config.gamma1),
        parameter=None,
        breakdown=None,
        upper_bound=True,
    )


def dnf_rate_at(config: LinkConfig, rate_c: float) -> float:
    """Two-way DNF rate when the C-bound direction is loaded at ``rate_c``.

    For any ``rate_c`` in [C(gamma1), C(gamma2)] the A-bound direction runs
    at C(gamma1) and the two-way rate

        (C(g1) + rate_c) / (1 + rate_c / C(g1))

    collapses to C(gamma1) identically, so the whole interval attains the
    upper bound.
    """
    c1 = capacity(config.gamma1)
    c2 = capacity(config.gamma2)
    if not (c1 <= rate_c <= c2):
        raise ValueError(
            f"rate_c must lie in [C(gamma1), C(gamma2)] = [{c1!r}, {c2!r}], got {rate_c!r}"
        )
    return (c1 + rate_c) / (1.0 + rate_c / c1)


def dnf_codebook_cardinality(config: LinkConfig, n_symbols: float) -> float:
    """Conjectured relay codebook size for DNF, as a bit exponent.

    The relay is believed to need ``max(2**(N*R_A), 2**(N*R_C))`` denoised
    codewords when the directions carry R_A and R_C; this returns the
    exponent ``N * max(R_A, R_C)`` in bits to keep the number
    representable.  Both directions at their individual capacities gives
    ``N * C(gamma2)``.
    """
    if n_symbols <= 0:
        raise ValueError(f"n_symbols must be positive, got {n_symbols!r}")
    return n_symbols * max(capacity(config.gamma1), capacity(config.gamma2))
