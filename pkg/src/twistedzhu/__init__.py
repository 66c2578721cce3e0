"""Exact kernels for vertex-operator-algebra mode calculus, twisted Zhu
algebras, their bimodules, and a membership-certificate verifier."""

from .bimodule import (BimodQuotient, BimodSpan, circle_bimod,
                       congruence_coefficient, dj_star, generalized_circle,
                       graded_action, left_action, odag_generators,
                       opp2_generators, opp3_generators, oprime_generators,
                       right_action, shift_bimod)
from .certificates import (build_context, certificate_entry,
                           load_certificate_file, regenerate,
                           verify_certificate_file, write_certificate_file)
from .checks import CHECKS, make_config, make_context, run_check
from .scalars import Cyc, CycField, gen_binomial, parse_fraction
from .twistedfock import TwistedFock, bullet_action, omega_space, zero_mode
from .voa import AdjointModule, VoaContext, residue_sum
from .zhu import OSpan, ZhuQuotient, circle_zhu, o_zhu_generators, star_zhu

__all__ = [
    "AdjointModule", "BimodQuotient", "BimodSpan", "CHECKS", "Cyc",
    "CycField", "OSpan", "TwistedFock", "VoaContext", "ZhuQuotient",
    "build_context", "bullet_action", "certificate_entry", "circle_bimod",
    "circle_zhu", "congruence_coefficient", "dj_star", "gen_binomial",
    "generalized_circle", "graded_action", "left_action",
    "load_certificate_file", "make_config", "make_context",
    "o_zhu_generators", "odag_generators", "omega_space", "opp2_generators",
    "opp3_generators", "oprime_generators", "parse_fraction", "regenerate",
    "residue_sum", "right_action", "run_check", "shift_bimod", "star_zhu",
    "verify_certificate_file", "write_certificate_file", "zero_mode",
]
