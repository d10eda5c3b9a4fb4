"""Numerical checks for n-centered matrices and generalized Aluthge transforms."""

from .aluthge import (DEFAULT_GRID, AluthgeChain, AluthgeParams,
                      aluthge_modulus_closed_forms, aluthge_transform,
                      check_lemma_4_1, check_lemma_4_4, check_u_tilde_power,
                      iterated_aluthge, u_tilde, u_tilde_chain)
from .centered import (CenteredReport, centered_report, check_lemma_3_2,
                       check_lemma_3_3, check_remark_3_5, is_binormal,
                       is_n_centered_commutator, is_n_centered_definitional,
                       max_centered_order, parametrized_centered_test)
from .equivalence import Condition, EquivalenceVerdict, Status
from .generators import (OperatorSpec, block_shift_family, dense_random,
                         direct_sum, identity, jordan, psd_random, quasinormal,
                         unitary_random, weighted_shift)
from .kernel import (DEFAULT_CONFIG, KernelError, NotHermitianError,
                     NotPSDError, ToleranceConfig, Value, Verdict, psd_power)
from .polar import PolarForm, adjoint_polar, is_polar_pair, modulus, polar_decompose
from .theorems import (OperatorContext, verify_corollary_5_4, verify_lemma_3_1,
                       verify_theorem_3_4, verify_theorem_4_3,
                       verify_theorem_4_5, verify_theorem_5_1,
                       verify_theorem_5_3)

__version__ = "0.1.0"
