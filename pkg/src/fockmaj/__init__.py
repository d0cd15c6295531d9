"""fockmaj: majorization tools for entanglement enhancement of two-mode
squeezed vacuum under local filtration.

The package covers truncated Fock-diagonal spectra and their functionals
(fock_core), canonical filtration operators and their order predicates
(filter_ops), majorization comparison plus the constructive circulant
certificate (majorization), filtered Schmidt spectra for the standard
enhancement schemes (filtration), approximate majorization for realistic
photon addition/subtraction (approx_major), exact-rational series
certificates for dual k-photon addition (exact_kk), and deterministic
(eta, lambda) region scans with a CLI (scans, cli).
"""

from ._version import __version__
from .errors import (
    DegenerateIdeal,
    DivergentState,
    FockmajError,
    SpecSyntaxError,
    TruncationTooCoarse,
    ZeroNormalization,
    ZeroState,
)
from .fock_core import (
    ProbVector,
    TmsvParams,
    binary_entropy,
    mean_photon_number,
    shannon_entropy,
    squeezing_db,
    thermal_eigenvalues,
    total_variation_distance,
)
from .filter_ops import (
    FilterOp,
    concat,
    fock_amplifying_threshold,
    ideal_addsub,
    identity_op,
    is_fock_amplifying,
    is_fock_orthogonal,
    is_fock_preserving,
    jointly_fock_amplifying,
    make_standard,
    parse_filter_spec,
    serialize_filter_spec,
)
from .majorization import (
    CirculantStochastic,
    MajorOrder,
    apply_circulant,
    build_circulant_d,
    compare,
    majorizes,
)
from .filtration import (
    DualSingle,
    General,
    SchemeSpec,
    SingleMulti,
    entropy_of_entanglement,
    filtered_schmidt,
    filtered_spectrum_fock_order,
    normalization_constant,
    parse_scheme,
    reduce_to_single_mode,
    scheme_spectrum,
    serialize_scheme,
)
from .approx_major import (
    EpsDecomposition,
    RealisticParams,
    entropy_continuity_bound,
    eps_decompose,
    m_vector,
    nu_upper_bound,
    p_star,
    realistic_spectrum,
    sigma_partial_sum_closed,
)
from .exact_kk import (
    RationalSeries,
    c_kk_series,
    conjecture_scan,
    q_kk,
    verify_d_kk,
    verify_kk_expansion,
)
from .scans import (
    CompareReport,
    ScanGrid,
    ScanResult,
    run_compare,
    scan_entropy,
    scan_min_k,
    scan_tvd_bound,
    write_csv,
    write_json,
    write_matrix,
)

__all__ = [name for name in dir() if not name.startswith("_")]
