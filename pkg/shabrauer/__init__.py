# shabrauer/__init__.py

"""
Finite group cohomology with explicit cocycles, Sha^1_omega,alg of two-term
complexes of modules, and Brauer group reports built on top of it.
"""

import logging
from typing import Optional

from shabrauer.algebra.fingroup import FinGroup, Subgroup, cyclic_subgroups
from shabrauer.algebra.gmodule import GModule, TwoTermComplex, validate_complex, validate_module
from shabrauer.algebra.linalg import AbelianGroupStructure, IntMatrix, smith_normal_form
from shabrauer.cohomology.groups import cohomology_group, hypercohomology_h1
from shabrauer.cohomology.maps import five_term_sequence, inflation_map, restriction_map
from shabrauer.config import DEFAULT_CONFIG, Config
from shabrauer.errors import ShaBrauerError
from shabrauer.sha import Hypotheses, abelianize_presentation, brauer_group, sha1_omega_alg, sha_omega_alg_module
from shabrauer.utils.logging import setup_logger

__version__ = "0.1.0"


def configure(config: Optional[Config] = None) -> logging.Logger:
    """
    Configures the package logger from a Config (defaults to the environment).

    Returns:
        logging.Logger: The "shabrauer" logger.
    """
    config = config or Config.from_env()
    return setup_logger("shabrauer", log_file=config.log_file, level=config.log_level)


__all__ = [
    "AbelianGroupStructure",
    "Config",
    "DEFAULT_CONFIG",
    "FinGroup",
    "GModule",
    "Hypotheses",
    "IntMatrix",
    "ShaBrauerError",
    "Subgroup",
    "TwoTermComplex",
    "abelianize_presentation",
    "brauer_group",
    "cohomology_group",
    "configure",
    "cyclic_subgroups",
    "five_term_sequence",
    "hypercohomology_h1",
    "inflation_map",
    "restriction_map",
    "sha1_omega_alg",
    "sha_omega_alg_module",
    "smith_normal_form",
    "validate_complex",
    "validate_module",
]
