"""Certified verification of the 3-mod-4 semiprime bias.

The toolkit has two halves: an exact/bounded counting engine that walks
odd x with a sound skip-ahead rule (verifier), and a directed-rounded
evaluation of the explicit prime-counting bounds and the collected
analytic lower bound (bounds, certificate). Both sit on a wheel-assisted
segmented sieve (sieve) and checkpointed count tables (tables).
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .bounds import (
    BoundResult,
    BoundSource,
    li_bounds,
    li_lower,
    mertens_bounds,
    pi_3mod4_bounds,
    pi_ap_bounds,
    pi_bounds,
    pi_lower,
    pi_upper,
    scan_3mod4_bounds,
)
from .certificate import (
    CertResult,
    CharSumTable,
    certify_tail,
    compute_char_moments,
    lchi_bracket,
    martin_coefficients,
    small_constants_audit,
    w_lower_bound,
)
from .errors import ConfigurationError, ResourceError, ValidityRangeError
from .rounding import RInterval
from .sieve import (
    PrimeFlags,
    Wheel,
    build_wheel,
    is_prime,
    load_flags,
    save_flags,
    sieve_primes,
)
from .tables import (
    CheckpointTable,
    SmallPrimeList,
    build_checkpoints,
    build_small_prime_list,
    count_primes_3mod4_upto,
    count_primes_upto,
    load_checkpoints,
    prime_index,
    prime_index_3mod4,
    save_checkpoints,
)
from .verifier import (
    BiasCounts,
    VerificationReport,
    brute_force_counts,
    count_at,
    skip_ahead,
    verify_range,
)

__version__ = "0.1.0"
