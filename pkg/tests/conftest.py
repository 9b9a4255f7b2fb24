from __future__ import annotations

import pytest

from affinehsp.groups import GroupSpec


@pytest.fixture(scope="session")
def a7():
    return GroupSpec.affine(7)


@pytest.fixture(scope="session")
def a23():
    return GroupSpec.affine(23)


@pytest.fixture(scope="session")
def q3_7():
    return GroupSpec.qhedral(7, 3)
