"""
Shared type aliases for array-valued quantities.
"""

from __future__ import annotations

from typing import Literal, TypeAlias, TypeVar

import numpy as np
import numpy.typing as npt

########################################################
#              Type variables
########################################################

T = TypeVar("T")

########################################################
#              Array aliases
########################################################

FloatArray: TypeAlias = npt.NDArray[np.float64]
IntArray: TypeAlias = npt.NDArray[np.int64]
BoolArray: TypeAlias = npt.NDArray[np.bool_]
ArrayLike: TypeAlias = npt.ArrayLike

########################################################
#              Literal choices
########################################################

RegularizationModel: TypeAlias = Literal["l1", "l2"]
AzimuthalBranch: TypeAlias = Literal["cos", "const", "sin"]
