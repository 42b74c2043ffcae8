from typing import get_args

from src.util.types import AzimuthalBranch, RegularizationModel


def test_literal_choices():
    """Test the literal option sets."""
    assert set(get_args(RegularizationModel)) == {"l1", "l2"}
    assert get_args(AzimuthalBranch) == ("cos", "const", "sin")
