# SPDX-License-Identifier: Apache-2.0
"""
Utility modules for postlb.
"""

from postlb.utils.generators import (
    random_convention,
    random_formula,
    random_parts,
    random_program,
)

__all__ = [
    "random_convention",
    "random_formula",
    "random_parts",
    "random_program",
]
