"""Row kernels for layout-backed schedules.

Given a super-team layout, a team's opponents and venues over any day
range follow from closed-form arithmetic, so a single team's row can be
produced without touching the rest of the table.  ``team_row_loop`` is
the per-day loop compiled with numba; ``team_row_numpy`` is the
vectorised fallback (one vector operation block per time slot).  The
``team_row`` dispatcher picks the path selected by the TTPKIT_NO_NUMBA
environment flag (see :mod:`ttpkit.accel`).
"""

from __future__ import annotations

import numpy as np

from . import accel
from .accel import maybe_njit


def slot_role(P: int, r: int, s: int) -> tuple[int, bool, bool]:
    """Super-team P's pairing in slot r: (opponent, visiting?, left?).

    The fixed super-team s-1 sits leftmost; moving super-team j occupies
    cycle position ((r + j - 1) mod (s-1)) + 1 in slot r.  Position 1
    faces the fixed super-team (a left-type game except in slot 1) and
    position p faces position s+1-p, the pair direction alternating with
    both pair index and slot.  ``visiting`` means the team plays the
    first block day away.
    """
    F = s - 1
    if P == F:
        Q = (1 - r) % F
        if r == 1:
            return Q, True, False
        return Q, r % 2 == 0, True
    i = (r + P - 1) % F + 1
    if i == 1:
        if r == 1:
            return F, False, False
        return F, r % 2 == 1, True
    if i <= s // 2:
        t = i - 1
        visiting = (t + r) % 2 == 0
    else:
        t = s - i
        visiting = (t + r) % 2 == 1
    Q = (s + 1 - i - r) % F
    return Q, visiting, False


@maybe_njit(cache=True, nogil=True)
def team_row_loop(k, d, s, P, q, seat, team_at, tt2_opp, tt2_home, g0, g1, opp_out, home_out):
    m = k * d
    B = 2 * m
    F = s - 1
    phase = F * B
    half = s // 2
    a = q // k
    f = q % k
    for idx in range(g1 - g0):
        g = g0 + idx
        if g < phase:
            r = g // B + 1
            D = g - (r - 1) * B
            # pairing of super-team P in slot r
            if P == F:
                Q = (1 - r) % F
                left = r != 1
                visiting = True if r == 1 else (r % 2 == 0)
            else:
                i = (r + P - 1) % F + 1
                if i == 1:
                    Q = F
                    left = r != 1
                    visiting = (r != 1) and (r % 2 == 1)
                else:
                    left = False
                    if i <= half:
                        t = i - 1
                        visiting = (t + r) % 2 == 0
                    else:
                        t = s - i
                        visiting = (t + r) % 2 == 1
                    Q = (s + 1 - i - r) % F
            if left:
                im = D if D < m else D - m
                unb = (im % 2 == 0) if D < m else (im % 2 == 1)
                loc = (im - q) % m
                hm = (not unb) if visiting else unb
            else:
                E = (D - f - 2 * k * a) % B
                big = E // (2 * k)
                u = E - big * 2 * k
                if u < k:
                    loc = k * big + u
                    hm = not visiting
                else:
                    loc = k * big + (u - k)
                    hm = visiting
            opp_out[idx] = Q * m + loc
            home_out[idx] = hm
        else:
            e = g - phase
            st = seat[q]
            opp_out[idx] = P * m + team_at[tt2_opp[st, e]]
            home_out[idx] = tt2_home[st, e]


def team_row_numpy(k, d, s, P, q, seat, team_at, tt2_opp, tt2_home, g0, g1):
    m = k * d
    B = 2 * m
    phase = (s - 1) * B
    a, f = divmod(q, k)
    opp = np.empty(g1 - g0, dtype=np.int32)
    home = np.empty(g1 - g0, dtype=np.bool_)
    g = g0
    while g < min(g1, phase):
        r = g // B + 1
        base = (r - 1) * B
        lo = g - base
        hi = min(g1 - base, B)
        D = np.arange(lo, hi, dtype=np.int64)
        Q, visiting, left = slot_role(P, r, s)
        if left:
            im = np.where(D < m, D, D - m)
            unb = np.where(D < m, im % 2 == 0, im % 2 == 1)
            loc = (im - q) % m
            hm = ~unb if visiting else unb
        else:
            E = (D - f - 2 * k * a) % B
            big, u = np.divmod(E, 2 * k)
            first = u < k
            loc = np.where(first, k * big + u, k * big + u - k)
            hm = ~first if visiting else first
        sl = slice(g - g0, g - g0 + (hi - lo))
        opp[sl] = Q * m + loc
        home[sl] = hm
        g = base + hi
    if g1 > phase:
        e0 = max(g0, phase) - phase
        e1 = g1 - phase
        st = int(seat[q])
        sl = slice(max(g0, phase) - g0, g1 - g0)
        opp[sl] = P * m + team_at[tt2_opp[st, e0:e1]]
        home[sl] = tt2_home[st, e0:e1]
    return opp, home


def team_row(k, d, s, P, q, seat, team_at, tt2_opp, tt2_home, g0, g1):
    if accel.USE_NUMBA:
        opp = np.empty(g1 - g0, dtype=np.int32)
        home = np.empty(g1 - g0, dtype=np.bool_)
        team_row_loop(k, d, s, P, q, seat, team_at, tt2_opp, tt2_home, g0, g1, opp, home)
        return opp, home
    return team_row_numpy(k, d, s, P, q, seat, team_at, tt2_opp, tt2_home, g0, g1)
