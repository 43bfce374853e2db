from fractions import Fraction

import pytest

from pcsamp import SignalSpec, validate_spec


@pytest.fixture(scope="session")
def running_spec() -> SignalSpec:
    """Two regions with lengths 7/4 and 5/2 grid steps, amplitudes 4 and 2."""
    return validate_spec(SignalSpec.from_columns(g=[4, 2], n=[2, 3], f=["1/4", "1/2"]))


@pytest.fixture(scope="session")
def example6_spec() -> SignalSpec:
    """Three regions whose atlas holds two patterns differing only in eta_3."""
    return validate_spec(
        SignalSpec.from_columns(g=[4, 2, 1], n=[3, 3, 2], f=["1/4", "1/3", "1/5"])
    )


def F(*args) -> Fraction:
    return Fraction(*args)
