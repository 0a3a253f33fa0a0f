"""Escaping Fatou components of transcendental Hénon maps F(z, w) = (a*w + f(z), z).

Iteration, certified limit functions h1 and h2, the conjugacy to
L(z, w) = (a*w, z), and numerical certificates for the dynamics on the
half-plane region W_R.
"""

from ._version import __version__
from .bounded import Bounded
from .certificate import Certificate
from .certification import (
    AbsorbingVerdict,
    DiskSpec,
    GrowthReport,
    RoucheCertificate,
    absorbing_membership,
    growth_check,
    invariance_check,
    lemma_disk_radius,
    rouche_certificate,
    rouche_certificate_auto,
    rouche_disk,
    u_n_bound,
    u_n_diagnostics,
    winding_number,
)
from .dynamics import (
    OVERFLOW,
    MapSpec,
    Orbit,
    Point,
    Region,
    admissible_R,
    apply,
    apply_inverse,
    f_eval,
    f_sup_bound,
    format_map_spec,
    in_region,
    is_admissible,
    iterate_orbit,
    make_map,
    parse_map_spec,
)
from .errors import CurveTooClose, MTooSmallError, NotAbsorbed, PreconditionError, ToleranceUnreachable
from .linearization import (
    ConjugacyResult,
    conjugacy_residual,
    linear_apply,
    phi,
    phi_n,
    phi_n_composed,
    sandwich_phi_W,
)
from .render import EscapeCell, SliceSpec, render_slice
from .series import LimitPair, delta_bound, k_sums, limit_pair, ratio_sequence, tail_bound
