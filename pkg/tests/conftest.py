import functools

import pytest

from concordia import presets
from concordia.crossconn import build_omega_s, build_s_omega

# the preset battery used throughout; all concordant
SMALL_PRESETS = ("cyclic:2", "cyclic:3", "semilattice-chain:2",
                 "semilattice-chain:3", "left-zero:2", "full-transformation:2",
                 "brandt-b2")

# the unique canonical concordant non-regular semigroup of order 4
# (found by the exhaustive search; cone semigroups behave differently on it)
NONREGULAR_CONCORDANT = ((0, 0, 0, 0), (0, 0, 0, 1), (0, 1, 2, 0), (0, 0, 0, 3))


@functools.cache
def semigroup(name):
    return presets.preset(name)


@functools.cache
def omega_bundle(name):
    s = semigroup(name)
    omega = build_omega_s(s)
    somega = build_s_omega(omega)
    return s, omega, somega
