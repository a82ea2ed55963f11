import cmath
import math

import pytest

import mpref
from cavrate import specfun as sf
from cavrate.errors import DomainError


def taylor_j1(z, terms=50):
    """Independent power-series evaluation of j1 around the origin."""
    z = complex(z)
    total = 0j
    term = z / 3  # m = 0 term: z / (1 * 3!!)
    for m in range(terms):
        total += term
        term *= -z * z / (2 * (m + 1) * (2 * m + 5))
    return total


# value frozen from taylor_j1(1 + 0.5j); the test recomputes it as well
J1_1_05J = 0.32363383660725736 + 0.12236304512236684j


def test_j1_against_taylor_series():
    for z in (1 + 0.5j, 0.3 - 0.2j, 2.0 + 0j, 0.01 + 0.02j, -1.5 + 1j):
        oracle = taylor_j1(z)
        assert abs(sf.sph_j1(z) - oracle) <= 1e-14 * abs(oracle)
    assert abs(sf.sph_j1(1 + 0.5j) - J1_1_05J) <= 1e-13
    assert abs(taylor_j1(1 + 0.5j) - J1_1_05J) <= 1e-15


def test_j1_at_half_pi():
    assert sf.sph_j1(math.pi / 2) == pytest.approx(4 / math.pi ** 2, rel=1e-15)


def test_j1_ratios_continuous_through_origin():
    assert sf.j1_over_z(0) == pytest.approx(1 / 3, abs=1e-16)
    assert sf.riccati_j1_over_z(0) == pytest.approx(2 / 3, abs=1e-16)
    for z in (1e-8, 1e-8j, (1 + 1j) * 1e-8):
        assert abs(sf.j1_over_z(z) - 1 / 3) < 1e-15
        assert abs(sf.riccati_j1_over_z(z) - 2 / 3) < 1e-15


def test_series_closed_form_crossover(rng):
    """Both evaluation branches agree with the mp reference around |z| = 0.5."""
    for _ in range(100):
        radius = rng.uniform(0.05, 1.5)
        phase = rng.uniform(0, 2 * math.pi)
        z = radius * cmath.exp(1j * phase)
        ref = complex(mpref.j1(mpref.to_mpc(z)))
        assert abs(sf.sph_j1(z) - ref) <= 5e-15 * max(abs(ref), 1e-300)
        ref = complex(mpref.rj1(mpref.to_mpc(z)))
        assert abs(sf.riccati_j1(z) - ref) <= 5e-15 * max(abs(ref), 1e-300)


def test_hankel_against_mp_reference(rng):
    samples = [1.0 + 0.0j, 2 + 1j]
    while len(samples) < 50:
        z = complex(rng.uniform(-8, 8), rng.uniform(-4, 4))
        if abs(z) >= 0.05:
            samples.append(z)
    for z in samples:
        zm = mpref.to_mpc(z)
        for ours, theirs in ((sf.sph_h1_1, mpref.h1_1),
                             (sf.sph_h2_1, mpref.h2_1),
                             (sf.riccati_h1, mpref.rh1),
                             (sf.riccati_h2, mpref.rh2)):
            ref = complex(theirs(zm))
            assert abs(ours(z) - ref) <= 1e-13 * abs(ref)


def test_second_kind_is_conjugate_for_real_argument():
    for z in (0.3, 1.0, 2.7, 11.0):
        assert sf.sph_h2_1(z) == pytest.approx(sf.sph_h1_1(z).conjugate(),
                                               rel=1e-15)


def test_hankel_wronskian(rng):
    """h1 h2' - h2 h1' = -2i/z**2 for order 1."""
    checked = 0
    while checked < 200:
        z = complex(rng.uniform(-20, 20), rng.uniform(-10, 10))
        if not 1e-3 < abs(z) < 30:
            continue
        dh1 = sf.sph_h1_0(z) - 2 * sf.sph_h1_1(z) / z
        dh2 = sf.sph_h2_0(z) - 2 * sf.sph_h2_1(z) / z
        wron = sf.sph_h1_1(z) * dh2 - sf.sph_h2_1(z) * dh1
        target = -2j / (z * z)
        assert abs(wron - target) <= 1e-10 * abs(target)
        checked += 1


def test_hankel_superposition(rng):
    """h1 + h2 = 2 j1 at every sampled argument."""
    checked = 0
    while checked < 200:
        z = complex(rng.uniform(-20, 20), rng.uniform(-10, 10))
        if not 1e-3 < abs(z) < 30:
            continue
        total = sf.sph_h1_1(z) + sf.sph_h2_1(z)
        scale = max(abs(total), abs(sf.sph_h1_1(z)) * 1e-10)
        assert abs(total - 2 * sf.sph_j1(z)) <= 1e-12 * scale
        checked += 1


@pytest.mark.parametrize("kind,fn", [("j1", sf.riccati_j1),
                                     ("h1", sf.riccati_h1),
                                     ("h2", sf.riccati_h2)])
def test_riccati_matches_finite_difference(kind, fn):
    def base(z):
        return {"j1": sf.sph_j1, "h1": sf.sph_h1_1, "h2": sf.sph_h2_1}[kind](z)

    for z in (0.7 + 0.1j, 2 + 1j, 5 - 0.5j, 1.3j + 4):
        h = 1e-6
        fd = ((z + h) * base(z + h) - (z - h) * base(z - h)) / (2 * h)
        exact = fn(z)
        assert abs(exact - fd) <= 1e-6 * abs(exact)
        assert sf.riccati_deriv(kind, z) == exact


def test_riccati_j1_closed_form_identity(rng):
    """[z j1]' = z j0 - j1 over the sampled plane."""
    for _ in range(50):
        z = complex(rng.uniform(-10, 10), rng.uniform(-5, 5))
        expected = z * sf.sph_j0(z) - sf.sph_j1(z)
        assert abs(sf.riccati_j1(z) - expected) <= 1e-12 * max(1, abs(expected))


def test_domain_errors():
    for fn in (sf.sph_h1_0, sf.sph_h1_1, sf.sph_h2_0, sf.sph_h2_1,
               sf.riccati_h1, sf.riccati_h2):
        with pytest.raises(DomainError):
            fn(0)
    with pytest.raises(DomainError):
        sf.riccati_deriv("h7", 1.0)


def test_overflow_guard():
    with pytest.raises(OverflowError):
        sf.sph_h1_1(1 + 701j)
    with pytest.raises(OverflowError):
        sf.riccati_h2(1 - 800j)
    # just inside the guard still evaluates
    sf.sph_h2_1(1 - 699j)
