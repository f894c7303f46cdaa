"""Compiled core of the backward-in-time event dynamics.

Everything here operates on flat arrays: a partition state is
``labels`` (bitmasks over the four lineage labels), ``xs``/``ys``
(block marks) and the block count ``n``. The label bits are A=1, a=2,
B=4, b=8; a locus mask selects which bits belong to the first locus
(3 for the standard two-locus sample, 15 for one-locus k=4 runs, where
recombination then never splits a block).

Event generation follows the thinning scheme: per kind, candidate
waiting times are exponential with rate n * pi * radius^2 * intensity;
a candidate picks a mark uniformly, draws the event center uniformly in
that mark's ball, counts m = number of marks covered, and is accepted
with probability 1/m. This yields events covering at least one mark
with exactly the union-of-balls intensity (``propose_accepted``, used
by the public event API). Both kind clocks are redrawn each candidate
round, which is equivalent to regenerating them at state changes
because the rates depend only on the mark count.

The long-run trajectory kernels add one more exact thinning layer:
events where every covered block fails its impact draw leave the state
unchanged, so candidates are accepted with probability
(1 - (1-u)^m)/m instead and the impact outcomes are then drawn
conditioned on at least one success (``propose_affecting`` /
``apply_affecting``). By the Poisson marking theorem the resulting
partition trajectory has exactly the same law while the loop skips the
do-nothing events.

All kernels take an ``np.random.Generator`` (Philox-backed in practice)
so replicate streams stay reproducible across processes.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

TWO_PI = 2.0 * math.pi

LAB_A = 1
LAB_a = 2
LAB_B = 4
LAB_b = 8
ALL_LABELS = LAB_A | LAB_a | LAB_B | LAB_b
LOCUS1_MASK = LAB_A | LAB_a  # locus-1 labels of the standard sample
KIND_SMALL = 0
KIND_LARGE = 1

# slack for closed-ball membership checks done on wrapped coordinates
_BALL_EPS = 1e-9


def pmf_arrays(pmf: dict[int, float]) -> tuple[np.ndarray, np.ndarray]:
    """Sorted support values and cumulative probabilities of a finite pmf."""
    vals = np.array(sorted(pmf), dtype=np.int64)
    probs = np.array([pmf[int(v)] for v in vals], dtype=np.float64)
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    return vals, cdf


def kernel_params(p) -> tuple:
    """Pack ModelParams into the flat tuple the kernels take.

    Layout: (L, R_s, R_l, u_s, u_l, r, rate_s1, rate_l1,
             vals_s, cdf_s, vals_l, cdf_l)
    where R_l = R_B * L**alpha, rate_s1 = pi R_s^2 and
    rate_l1 = pi R_B^2 / rho are the per-mark candidate rates.
    """
    L = float(p.L)
    R_l = float(p.R_B) * L ** float(p.alpha)
    rate_s1 = math.pi * float(p.R_s) ** 2
    rate_l1 = (math.pi * R_l**2) / (float(p.rho) * L ** (2.0 * float(p.alpha)))
    vals_s, cdf_s = pmf_arrays(p.lambda_s)
    vals_l, cdf_l = pmf_arrays(p.lambda_B)
    return (
        L,
        float(p.R_s),
        R_l,
        float(p.u_s),
        float(p.u_B),
        float(p.r),
        rate_s1,
        rate_l1,
        vals_s,
        cdf_s,
        vals_l,
        cdf_l,
    )


def max_parents(kp: tuple) -> int:
    return int(max(kp[8].max(), kp[10].max()))


@njit(cache=True, inline="always")
def _wrap1(v, L):
    w = v % L
    if w >= L:
        w -= L
    return w


@njit(cache=True, inline="always", fastmath=True)
def _wrap_near(v, L):
    # wrap for v in (-L, 2L): one branch instead of fmod; valid for points
    # displaced from a canonical coordinate by less than L
    if v >= L:
        return v - L
    if v < 0.0:
        return v + L
    return v


@njit(cache=True, inline="always")
def _min_image(d, L):
    d = d % L
    if d >= 0.5 * L:
        d -= L
    return d


@njit(cache=True, inline="always", fastmath=True)
def _min_image_near(d, L):
    # minimal image for d = a - b with a, b canonical in [0, L)
    if d >= 0.5 * L:
        return d - L
    if d < -0.5 * L:
        return d + L
    return d


@njit(cache=True, inline="always", fastmath=True)
def _dist2(ax, ay, bx, by, L):
    # inputs canonical in [0, L), so the difference sits in (-L, L)
    dx = _min_image_near(ax - bx, L)
    dy = _min_image_near(ay - by, L)
    return dx * dx + dy * dy


@njit(cache=True, inline="always", fastmath=True)
def _sample_ball(cx, cy, R, L, rng):
    # rejection from the bounding square; R < L/2 keeps the wrap one-branch
    while True:
        ux = 2.0 * rng.random() - 1.0
        uy = 2.0 * rng.random() - 1.0
        if ux * ux + uy * uy <= 1.0:
            return _wrap_near(cx + R * ux, L), _wrap_near(cy + R * uy, L)


@njit(cache=True, inline="always", fastmath=True)
def _sample_pmf(vals, cdf, rng):
    u = rng.random()
    for k in range(cdf.shape[0]):
        if u <= cdf[k]:
            return vals[k]
    return vals[cdf.shape[0] - 1]


@njit(cache=True, fastmath=True)
def propose_accepted(xs, ys, n, L, R_s, R_l, rate_s1, rate_l1, rng, covered):
    """Run candidate rounds until one is accepted.

    Returns (dt, kind, cx, cy) where dt includes the waiting time of all
    rejected candidates; fills ``covered`` for the accepted event.
    """
    t = 0.0
    while True:
        dt_s = rng.standard_exponential() / (n * rate_s1)
        if rate_l1 > 0.0:
            dt_l = rng.standard_exponential() / (n * rate_l1)
        else:
            dt_l = 1e300  # finite sentinel: never wins against dt_s
        if dt_s <= dt_l:
            kind = KIND_SMALL
            t += dt_s
            radius = R_s
        else:
            kind = KIND_LARGE
            t += dt_l
            radius = R_l
        i = rng.integers(0, n)
        cx, cy = _sample_ball(xs[i], ys[i], radius, L, rng)
        r2 = radius * radius * (1.0 + _BALL_EPS)
        m = 0
        for k in range(n):
            c = _dist2(xs[k], ys[k], cx, cy, L) <= r2
            covered[k] = c
            if c:
                m += 1
        if m == 1 or rng.random() * m < 1.0:
            return t, kind, cx, cy


@njit(cache=True, fastmath=True)
def sample_parents(cx, cy, radius, L, vals, cdf, rng, px, py):
    """Draw the parent count j and j parent positions uniform in the ball."""
    j = _sample_pmf(vals, cdf, rng)
    for p in range(j):
        px[p], py[p] = _sample_ball(cx, cy, radius, L, rng)
    return j


@njit(cache=True, inline="always", fastmath=True)
def _resolve(
    labels, xs, ys, n, aff, recomb_p, is_large, j, px, py,
    locus1_mask, rng, group, newlab, newx, newy,
):
    """Move/merge blocks given the affected flags; returns the new count.

    An affected block goes wholesale to a uniform parent, except in a
    small event with j >= 2 where with probability ``recomb_p`` its
    locus-1 and locus-2 labels go to the two members of a uniform
    ordered pair of distinct parents. Label groups landing on the same
    parent merge into one block at that parent's position.
    """
    for p in range(j):
        group[p] = 0
    nn = 0
    for k in range(n):
        if aff[k]:
            mask = labels[k]
            recombines = False
            if is_large == 0 and j > 1:
                recombines = rng.random() < recomb_p
            if recombines:
                i1 = rng.integers(0, j)
                i2 = rng.integers(0, j - 1)
                if i2 >= i1:
                    i2 += 1
                m1 = mask & locus1_mask
                m2 = mask & ~locus1_mask
                if m1 != 0:
                    group[i1] |= m1
                if m2 != 0:
                    group[i2] |= m2
            else:
                group[rng.integers(0, j)] |= mask
        else:
            newlab[nn] = labels[k]
            newx[nn] = xs[k]
            newy[nn] = ys[k]
            nn += 1
    for p in range(j):
        if group[p] != 0:
            newlab[nn] = group[p]
            newx[nn] = px[p]
            newy[nn] = py[p]
            nn += 1
    for k in range(nn):
        labels[k] = newlab[k]
        xs[k] = newx[k]
        ys[k] = newy[k]
    return nn


@njit(cache=True, fastmath=True)
def apply_body(
    labels,
    xs,
    ys,
    n,
    covered,
    impact,
    recomb_p,
    is_large,
    j,
    px,
    py,
    locus1_mask,
    rng,
    group,
    newlab,
    newx,
    newy,
    aff,
):
    """Resolve one accepted event on the partition state, in place.

    Each covered block is independently affected with probability
    ``impact``; the affected blocks then move and merge per ``_resolve``.
    Returns (new block count, number of affected blocks).
    """
    n_aff = 0
    for k in range(n):
        a = False
        if covered[k]:
            a = rng.random() < impact
        aff[k] = a
        if a:
            n_aff += 1
    nn = _resolve(
        labels, xs, ys, n, aff, recomb_p, is_large, j, px, py,
        locus1_mask, rng, group, newlab, newx, newy,
    )
    return nn, n_aff


@njit(cache=True, inline="always", fastmath=True)
def finish_event(
    labels,
    xs,
    ys,
    n,
    kind,
    cx,
    cy,
    covered,
    L,
    R_s,
    R_l,
    u_s,
    u_l,
    r_rec,
    vals_s,
    cdf_s,
    vals_l,
    cdf_l,
    locus1_mask,
    rng,
    px,
    py,
    group,
    newlab,
    newx,
    newy,
    aff,
):
    """Sample the body of an accepted event and apply it. Returns (n, n_aff)."""
    if kind == KIND_SMALL:
        j = sample_parents(cx, cy, R_s, L, vals_s, cdf_s, rng, px, py)
        return apply_body(
            labels, xs, ys, n, covered, u_s, r_rec, 0, j, px, py,
            locus1_mask, rng, group, newlab, newx, newy, aff,
        )
    j = sample_parents(cx, cy, R_l, L, vals_l, cdf_l, rng, px, py)
    return apply_body(
        labels, xs, ys, n, covered, u_l, 0.0, 1, j, px, py,
        locus1_mask, rng, group, newlab, newx, newy, aff,
    )


@njit(cache=True, fastmath=True)
def propose_affecting(
    xs, ys, n, L, R_s, R_l, u_s, u_l, rate_s1, rate_l1, rng, covered
):
    """Run candidate rounds until one with at least one impact success.

    The acceptance probability (1 - (1-u)^m)/m combines the
    union-intensity thinning with the probability that some covered
    block is affected, so retained events arrive with exactly the
    affecting-event intensity. Returns (dt, kind, cx, cy) with dt
    covering all skipped candidates; fills ``covered``.
    """
    t = 0.0
    while True:
        dt_s = rng.standard_exponential() / (n * rate_s1)
        if rate_l1 > 0.0:
            dt_l = rng.standard_exponential() / (n * rate_l1)
        else:
            dt_l = 1e300
        if dt_s <= dt_l:
            kind = KIND_SMALL
            t += dt_s
            radius = R_s
            u = u_s
        else:
            kind = KIND_LARGE
            t += dt_l
            radius = R_l
            u = u_l
        i = rng.integers(0, n)
        cx, cy = _sample_ball(xs[i], ys[i], radius, L, rng)
        r2 = radius * radius * (1.0 + _BALL_EPS)
        m = 0
        for k in range(n):
            c = _dist2(xs[k], ys[k], cx, cy, L) <= r2
            covered[k] = c
            if c:
                m += 1
        keep = 1.0 - (1.0 - u) ** m
        if rng.random() * m < keep:
            return t, kind, cx, cy


@njit(cache=True, fastmath=True)
def apply_affecting(
    labels,
    xs,
    ys,
    n,
    kind,
    cx,
    cy,
    covered,
    L,
    R_s,
    R_l,
    u_s,
    u_l,
    r_rec,
    vals_s,
    cdf_s,
    vals_l,
    cdf_l,
    locus1_mask,
    rng,
    px,
    py,
    group,
    newlab,
    newx,
    newy,
    aff,
):
    """Apply a retained event: impact outcomes conditioned on >= 1 success.

    Redrawing the covered blocks' Bernoullis until some block succeeds
    realizes exactly the conditional law. Returns (n, n_aff >= 1).
    """
    if kind == KIND_SMALL:
        u = u_s
        radius = R_s
        vals, cdf = vals_s, cdf_s
        rec = r_rec
        is_large = 0
    else:
        u = u_l
        radius = R_l
        vals, cdf = vals_l, cdf_l
        rec = 0.0
        is_large = 1
    while True:
        n_aff = 0
        for k in range(n):
            a = False
            if covered[k]:
                a = rng.random() < u
            aff[k] = a
            if a:
                n_aff += 1
        if n_aff > 0:
            break
    j = sample_parents(cx, cy, radius, L, vals, cdf, rng, px, py)
    nn = _resolve(
        labels, xs, ys, n, aff, rec, is_large, j, px, py,
        locus1_mask, rng, group, newlab, newx, newy,
    )
    return nn, n_aff


@njit(cache=True, inline="always", fastmath=True)
def _find_block(labels, n, bit):
    for k in range(n):
        if labels[k] & bit:
            return k
    return -1


@njit(cache=True)
def run_pair(sep_x, sep_y, gather_d, horizon, kp, jmax, rng):
    """Two single-locus lineages from separation (sep_x, sep_y).

    Returns (tau, T, n_events): coalescence and gathering times in
    original units, -1.0 where censored at the horizon.
    """
    (
        L, R_s, R_l, u_s, u_l, r_rec, rate_s1, rate_l1,
        vals_s, cdf_s, vals_l, cdf_l,
    ) = kp
    labels = np.empty(4, np.int64)
    xs = np.empty(4, np.float64)
    ys = np.empty(4, np.float64)
    covered = np.empty(4, np.bool_)
    aff = np.empty(4, np.bool_)
    px = np.empty(jmax, np.float64)
    py = np.empty(jmax, np.float64)
    group = np.empty(jmax, np.int64)
    newlab = np.empty(6, np.int64)
    newx = np.empty(6, np.float64)
    newy = np.empty(6, np.float64)

    labels[0] = LAB_A
    xs[0] = 0.0
    ys[0] = 0.0
    labels[1] = LAB_a
    xs[1] = _wrap1(sep_x, L)
    ys[1] = _wrap1(sep_y, L)
    n = 2
    g2 = gather_d * gather_d
    tau = -1.0
    T = 0.0 if _dist2(xs[0], ys[0], xs[1], ys[1], L) <= g2 else -1.0
    t = 0.0
    ev = 0
    while True:
        dt, kind, cx, cy = propose_affecting(
            xs, ys, n, L, R_s, R_l, u_s, u_l, rate_s1, rate_l1, rng, covered
        )
        if t + dt > horizon:
            break
        t += dt
        ev += 1
        n, n_aff = apply_affecting(
            labels, xs, ys, n, kind, cx, cy, covered, L, R_s, R_l, u_s, u_l,
            r_rec, vals_s, cdf_s, vals_l, cdf_l, LOCUS1_MASK,
            rng, px, py, group, newlab, newx, newy, aff,
        )
        if n == 1:
            tau = t
            if T < 0.0:
                T = t
            break
        if T < 0.0 and _dist2(xs[0], ys[0], xs[1], ys[1], L) <= g2:
            T = t
    return tau, T, ev


@njit(cache=True)
def run_two_locus(sep_x, sep_y, gather_d, horizon, kp, jmax, rng):
    """Standard two-individual, two-locus sample {A,B} vs {a,b}.

    Returns (tau_Aa, tau_Bb, T_Aa, T_Bb, ev_Aa, ev_Bb, n_events); times
    are -1.0 and event ids -1 where censored.
    """
    (
        L, R_s, R_l, u_s, u_l, r_rec, rate_s1, rate_l1,
        vals_s, cdf_s, vals_l, cdf_l,
    ) = kp
    labels = np.empty(4, np.int64)
    xs = np.empty(4, np.float64)
    ys = np.empty(4, np.float64)
    covered = np.empty(4, np.bool_)
    aff = np.empty(4, np.bool_)
    px = np.empty(jmax, np.float64)
    py = np.empty(jmax, np.float64)
    group = np.empty(jmax, np.int64)
    newlab = np.empty(6, np.int64)
    newx = np.empty(6, np.float64)
    newy = np.empty(6, np.float64)

    labels[0] = LAB_A | LAB_B
    xs[0] = 0.0
    ys[0] = 0.0
    labels[1] = LAB_a | LAB_b
    xs[1] = _wrap1(sep_x, L)
    ys[1] = _wrap1(sep_y, L)
    n = 2
    g2 = gather_d * gather_d

    tau_Aa = -1.0
    tau_Bb = -1.0
    T_Aa = -1.0
    T_Bb = -1.0
    ev_Aa = -1
    ev_Bb = -1
    d0 = _dist2(xs[0], ys[0], xs[1], ys[1], L)
    if d0 <= g2:
        T_Aa = 0.0
        T_Bb = 0.0
    t = 0.0
    ev = 0
    while True:
        dt, kind, cx, cy = propose_affecting(
            xs, ys, n, L, R_s, R_l, u_s, u_l, rate_s1, rate_l1, rng, covered
        )
        if t + dt > horizon:
            break
        t += dt
        ev += 1
        n, n_aff = apply_affecting(
            labels, xs, ys, n, kind, cx, cy, covered, L, R_s, R_l, u_s, u_l,
            r_rec, vals_s, cdf_s, vals_l, cdf_l, LOCUS1_MASK,
            rng, px, py, group, newlab, newx, newy, aff,
        )
        if tau_Aa < 0.0:
            ka = _find_block(labels, n, LAB_A)
            kb = _find_block(labels, n, LAB_a)
            if ka == kb:
                tau_Aa = t
                ev_Aa = ev
                if T_Aa < 0.0:
                    T_Aa = t
            elif (
                T_Aa < 0.0
                and _dist2(xs[ka], ys[ka], xs[kb], ys[kb], L) <= g2
            ):
                T_Aa = t
        if tau_Bb < 0.0:
            ka = _find_block(labels, n, LAB_B)
            kb = _find_block(labels, n, LAB_b)
            if ka == kb:
                tau_Bb = t
                ev_Bb = ev
                if T_Bb < 0.0:
                    T_Bb = t
            elif (
                T_Bb < 0.0
                and _dist2(xs[ka], ys[ka], xs[kb], ys[kb], L) <= g2
            ):
                T_Bb = t
        if tau_Aa >= 0.0 and tau_Bb >= 0.0:
            break
    return tau_Aa, tau_Bb, T_Aa, T_Bb, ev_Aa, ev_Bb, ev


@njit(cache=True)
def run_effective_recomb(horizon, kp, jmax, rng):
    """Both loci of one individual; stop at the first large event with an
    impact success while the two loci sit in distinct blocks.

    Returns the stopping time in original units, -1.0 if censored.
    """
    (
        L, R_s, R_l, u_s, u_l, r_rec, rate_s1, rate_l1,
        vals_s, cdf_s, vals_l, cdf_l,
    ) = kp
    labels = np.empty(4, np.int64)
    xs = np.empty(4, np.float64)
    ys = np.empty(4, np.float64)
    covered = np.empty(4, np.bool_)
    aff = np.empty(4, np.bool_)
    px = np.empty(jmax, np.float64)
    py = np.empty(jmax, np.float64)
    group = np.empty(jmax, np.int64)
    newlab = np.empty(6, np.int64)
    newx = np.empty(6, np.float64)
    newy = np.empty(6, np.float64)

    labels[0] = LAB_A | LAB_B
    xs[0] = 0.0
    ys[0] = 0.0
    n = 1
    t = 0.0
    while True:
        n_pre = n
        dt, kind, cx, cy = propose_affecting(
            xs, ys, n, L, R_s, R_l, u_s, u_l, rate_s1, rate_l1, rng, covered
        )
        if t + dt > horizon:
            return -1.0
        t += dt
        n, n_aff = apply_affecting(
            labels, xs, ys, n, kind, cx, cy, covered, L, R_s, R_l, u_s, u_l,
            r_rec, vals_s, cdf_s, vals_l, cdf_l, LOCUS1_MASK,
            rng, px, py, group, newlab, newx, newy, aff,
        )
        if kind == KIND_LARGE and n_pre == 2 and n_aff >= 1:
            return t


@njit(cache=True)
def run_separation_exit(exit_d, horizon, kp, jmax, rng):
    """Both loci of one individual; stop when their separation exceeds exit_d.

    Returns the exit time in original units, -1.0 if censored.
    """
    (
        L, R_s, R_l, u_s, u_l, r_rec, rate_s1, rate_l1,
        vals_s, cdf_s, vals_l, cdf_l,
    ) = kp
    labels = np.empty(4, np.int64)
    xs = np.empty(4, np.float64)
    ys = np.empty(4, np.float64)
    covered = np.empty(4, np.bool_)
    aff = np.empty(4, np.bool_)
    px = np.empty(jmax, np.float64)
    py = np.empty(jmax, np.float64)
    group = np.empty(jmax, np.int64)
    newlab = np.empty(6, np.int64)
    newx = np.empty(6, np.float64)
    newy = np.empty(6, np.float64)

    labels[0] = LAB_A | LAB_B
    xs[0] = 0.0
    ys[0] = 0.0
    n = 1
    e2 = exit_d * exit_d
    t = 0.0
    while True:
        dt, kind, cx, cy = propose_affecting(
            xs, ys, n, L, R_s, R_l, u_s, u_l, rate_s1, rate_l1, rng, covered
        )
        if t + dt > horizon:
            return -1.0
        t += dt
        n, n_aff = apply_affecting(
            labels, xs, ys, n, kind, cx, cy, covered, L, R_s, R_l, u_s, u_l,
            r_rec, vals_s, cdf_s, vals_l, cdf_l, LOCUS1_MASK,
            rng, px, py, group, newlab, newx, newy, aff,
        )
        if n == 2 and _dist2(xs[0], ys[0], xs[1], ys[1], L) > e2:
            return t


@njit(cache=True)
def run_snapshot(t_target, kp, jmax, rng):
    """Both loci of one individual; separation (original units) at t_target."""
    (
        L, R_s, R_l, u_s, u_l, r_rec, rate_s1, rate_l1,
        vals_s, cdf_s, vals_l, cdf_l,
    ) = kp
    labels = np.empty(4, np.int64)
    xs = np.empty(4, np.float64)
    ys = np.empty(4, np.float64)
    covered = np.empty(4, np.bool_)
    aff = np.empty(4, np.bool_)
    px = np.empty(jmax, np.float64)
    py = np.empty(jmax, np.float64)
    group = np.empty(jmax, np.int64)
    newlab = np.empty(6, np.int64)
    newx = np.empty(6, np.float64)
    newy = np.empty(6, np.float64)

    labels[0] = LAB_A | LAB_B
    xs[0] = 0.0
    ys[0] = 0.0
    n = 1
    t = 0.0
    while True:
        dt, kind, cx, cy = propose_affecting(
            xs, ys, n, L, R_s, R_l, u_s, u_l, rate_s1, rate_l1, rng, covered
        )
        if t + dt > t_target:
            break
        t += dt
        n, n_aff = apply_affecting(
            labels, xs, ys, n, kind, cx, cy, covered, L, R_s, R_l, u_s, u_l,
            r_rec, vals_s, cdf_s, vals_l, cdf_l, LOCUS1_MASK,
            rng, px, py, group, newlab, newx, newy, aff,
        )
    if n == 2:
        return np.sqrt(_dist2(xs[0], ys[0], xs[1], ys[1], L))
    return 0.0


@njit(cache=True, inline="always", fastmath=True)
def _popcount4(m):
    return (m & 1) + ((m >> 1) & 1) + ((m >> 2) & 1) + ((m >> 3) & 1)


@njit(cache=True)
def run_first_merge(mx, my, horizon, kp, jmax, rng):
    """Four one-locus lineages at marks (mx, my); stop at the first merge.

    Returns (code, t): code in 0..5 identifies the unordered pair of
    lineage indices that merged (lexicographic order 01,02,03,12,13,23),
    6 flags a merge involving more than one pair or more than two
    lineages, -1 means censored.
    """
    (
        L, R_s, R_l, u_s, u_l, r_rec, rate_s1, rate_l1,
        vals_s, cdf_s, vals_l, cdf_l,
    ) = kp
    labels = np.empty(4, np.int64)
    xs = np.empty(4, np.float64)
    ys = np.empty(4, np.float64)
    covered = np.empty(4, np.bool_)
    aff = np.empty(4, np.bool_)
    px = np.empty(jmax, np.float64)
    py = np.empty(jmax, np.float64)
    group = np.empty(jmax, np.int64)
    newlab = np.empty(6, np.int64)
    newx = np.empty(6, np.float64)
    newy = np.empty(6, np.float64)

    for k in range(4):
        labels[k] = 1 << k
        xs[k] = mx[k]
        ys[k] = my[k]
    n = 4
    t = 0.0
    while True:
        dt, kind, cx, cy = propose_affecting(
            xs, ys, n, L, R_s, R_l, u_s, u_l, rate_s1, rate_l1, rng, covered
        )
        if t + dt > horizon:
            return -1, horizon
        t += dt
        n, n_aff = apply_affecting(
            labels, xs, ys, n, kind, cx, cy, covered, L, R_s, R_l, u_s, u_l,
            r_rec, vals_s, cdf_s, vals_l, cdf_l, ALL_LABELS,
            rng, px, py, group, newlab, newx, newy, aff,
        )
        if n < 4:
            n_multi = 0
            merged_mask = 0
            for k in range(n):
                if _popcount4(labels[k]) > 1:
                    n_multi += 1
                    merged_mask = labels[k]
            if n_multi == 1 and _popcount4(merged_mask) == 2:
                lo = -1
                hi = -1
                for b in range(4):
                    if merged_mask & (1 << b):
                        if lo < 0:
                            lo = b
                        else:
                            hi = b
                return lo * (7 - lo) // 2 + (hi - lo - 1), t
            return 6, t


@njit(cache=True)
def run_single_motion(horizon, kp, jmax, rng):
    """One single-locus lineage, for jump-rate and variance oracles.

    Returns (n_aff_small, n_aff_large, sum_dx2, sum_dy2, max_jump_excess)
    where the sums accumulate squared per-coordinate jump sizes of
    affected events and max_jump_excess is max(jump - 2*radius) over
    events (<= 0 when the jump-length bound holds).
    """
    (
        L, R_s, R_l, u_s, u_l, r_rec, rate_s1, rate_l1,
        vals_s, cdf_s, vals_l, cdf_l,
    ) = kp
    labels = np.empty(4, np.int64)
    xs = np.empty(4, np.float64)
    ys = np.empty(4, np.float64)
    covered = np.empty(4, np.bool_)
    aff = np.empty(4, np.bool_)
    px = np.empty(jmax, np.float64)
    py = np.empty(jmax, np.float64)
    group = np.empty(jmax, np.int64)
    newlab = np.empty(6, np.int64)
    newx = np.empty(6, np.float64)
    newy = np.empty(6, np.float64)

    labels[0] = LAB_A
    xs[0] = 0.0
    ys[0] = 0.0
    n = 1
    t = 0.0
    n_aff_s = 0
    n_aff_l = 0
    sum_dx2 = 0.0
    sum_dy2 = 0.0
    max_excess = -np.inf
    while True:
        dt, kind, cx, cy = propose_affecting(
            xs, ys, n, L, R_s, R_l, u_s, u_l, rate_s1, rate_l1, rng, covered
        )
        if t + dt > horizon:
            break
        t += dt
        ox = xs[0]
        oy = ys[0]
        n, n_aff = apply_affecting(
            labels, xs, ys, n, kind, cx, cy, covered, L, R_s, R_l, u_s, u_l,
            r_rec, vals_s, cdf_s, vals_l, cdf_l, LOCUS1_MASK,
            rng, px, py, group, newlab, newx, newy, aff,
        )
        if n_aff > 0:
            dx = _min_image(xs[0] - ox, L)
            dy = _min_image(ys[0] - oy, L)
            sum_dx2 += dx * dx
            sum_dy2 += dy * dy
            radius = R_s if kind == KIND_SMALL else R_l
            excess = np.sqrt(dx * dx + dy * dy) - 2.0 * radius
            if excess > max_excess:
                max_excess = excess
            if kind == KIND_SMALL:
                n_aff_s += 1
            else:
                n_aff_l += 1
    return n_aff_s, n_aff_l, sum_dx2, sum_dy2, max_excess


@njit(cache=True)
def count_accepted(fx, fy, horizon, kp, rng):
    """Accepted-event counts per kind for marks pinned at (fx, fy).

    The state is never modified, so this measures the union-of-balls
    acceptance rate exactly.
    """
    (
        L, R_s, R_l, u_s, u_l, r_rec, rate_s1, rate_l1,
        vals_s, cdf_s, vals_l, cdf_l,
    ) = kp
    n = fx.shape[0]
    covered = np.empty(8, np.bool_)
    t = 0.0
    n_s = 0
    n_l = 0
    while True:
        dt, kind, cx, cy = propose_accepted(
            fx, fy, n, L, R_s, R_l, rate_s1, rate_l1, rng, covered
        )
        if t + dt > horizon:
            return n_s, n_l
        t += dt
        if kind == KIND_SMALL:
            n_s += 1
        else:
            n_l += 1


@njit(cache=True)
def run_invariant_audit(sep_x, sep_y, n_events, restart_every, kp, jmax, rng):
    """Run the two-locus dynamics and count invariant violations.

    Returns int64[4]: [partition, distinct marks, absorbing same-locus
    co-membership, new-block mark outside the event ball]. The state
    restarts from the standard init every ``restart_every`` events so
    split and merged regimes keep being exercised.
    """
    (
        L, R_s, R_l, u_s, u_l, r_rec, rate_s1, rate_l1,
        vals_s, cdf_s, vals_l, cdf_l,
    ) = kp
    labels = np.empty(4, np.int64)
    xs = np.empty(4, np.float64)
    ys = np.empty(4, np.float64)
    old_lab = np.empty(4, np.int64)
    old_x = np.empty(4, np.float64)
    old_y = np.empty(4, np.float64)
    covered = np.empty(4, np.bool_)
    aff = np.empty(4, np.bool_)
    px = np.empty(jmax, np.float64)
    py = np.empty(jmax, np.float64)
    group = np.empty(jmax, np.int64)
    newlab = np.empty(6, np.int64)
    newx = np.empty(6, np.float64)
    newy = np.empty(6, np.float64)
    viol = np.zeros(4, np.int64)

    n = 0
    merged_Aa = False
    merged_Bb = False
    since_restart = restart_every  # force init on first pass
    ev = 0
    while ev < n_events:
        if since_restart >= restart_every:
            labels[0] = LAB_A | LAB_B
            xs[0] = 0.0
            ys[0] = 0.0
            labels[1] = LAB_a | LAB_b
            xs[1] = _wrap1(sep_x, L)
            ys[1] = _wrap1(sep_y, L)
            n = 2
            merged_Aa = False
            merged_Bb = False
            since_restart = 0
        dt, kind, cx, cy = propose_affecting(
            xs, ys, n, L, R_s, R_l, u_s, u_l, rate_s1, rate_l1, rng, covered
        )
        n_old = n
        for k in range(n):
            old_lab[k] = labels[k]
            old_x[k] = xs[k]
            old_y[k] = ys[k]
        n, n_aff = apply_affecting(
            labels, xs, ys, n, kind, cx, cy, covered, L, R_s, R_l, u_s, u_l,
            r_rec, vals_s, cdf_s, vals_l, cdf_l, LOCUS1_MASK,
            rng, px, py, group, newlab, newx, newy, aff,
        )
        ev += 1
        since_restart += 1

        union = 0
        popsum = 0
        for k in range(n):
            union |= labels[k]
            popsum += _popcount4(labels[k])
        if union != ALL_LABELS or popsum != 4:
            viol[0] += 1
        for k in range(n):
            for k2 in range(k + 1, n):
                if xs[k] == xs[k2] and ys[k] == ys[k2]:
                    viol[1] += 1
        now_Aa = False
        now_Bb = False
        for k in range(n):
            if labels[k] & LOCUS1_MASK == LOCUS1_MASK:
                now_Aa = True
            if labels[k] & (LAB_B | LAB_b) == (LAB_B | LAB_b):
                now_Bb = True
        if (merged_Aa and not now_Aa) or (merged_Bb and not now_Bb):
            viol[2] += 1
        merged_Aa = now_Aa
        merged_Bb = now_Bb
        radius = R_s if kind == KIND_SMALL else R_l
        r2 = radius * radius * (1.0 + 1e-9)
        for k in range(n):
            carried = False
            for k2 in range(n_old):
                if (
                    labels[k] == old_lab[k2]
                    and xs[k] == old_x[k2]
                    and ys[k] == old_y[k2]
                ):
                    carried = True
                    break
            if not carried and _dist2(xs[k], ys[k], cx, cy, L) > r2:
                viol[3] += 1
    return viol
