"""Central table of numerical tolerances.

Every hard-coded threshold used by the library lives here so that the
accuracy contracts can be audited in one place.
"""

# structural checks at construction time (unit norm, orthogonality, det)
STRUCTURAL = 1e-12

# rotation angle below which the Rodrigues coefficients switch to series
ROTATION_SERIES_ANGLE = 1e-6

# stop the arithmetic-geometric mean when the gap drops below this
AGM_GAP = 1e-15

# moduli closer than this to 0 are routed to the trigonometric closed forms
ELLIPTIC_DEGENERATE = 1e-10

# 1 - k below this is routed to the hyperbolic closed forms; the Landen
# chain stays accurate far closer to 1 than to 0, and the solved shooting
# parameter sits an exponentially small distance above its critical value
# for extreme nonisotropy factors, so this gate sits at float resolution
ELLIPTIC_DEGENERATE_ONE = 4e-16

# |alpha - 1| below this (relative) selects the isotropic branch
ALPHA_ONE_REL = 1e-12

# the critical-regime window on m3(0)^2 - (1-alpha^2)/alpha^2, in units of
# float spacing of the threshold; only float-indistinguishable parameters
# are routed to the hyperbolic forms
CRITICAL_WINDOW_ULPS = 8.0

# |psi2| below this counts as sitting on the singular locus
SINGULAR_LOCUS = 1e-12


# synthesis root finding: endpoint miss target and minimal bracket width
SYNTHESIS_ENDPOINT = 1e-10
SYNTHESIS_ACCEPT = 1e-9
BRACKET_MIN = 1e-14

# event location: boundary-crossing time resolved to this width
EXIT_TIME_BISECT = 1e-11

# a component must undershoot zero by this much to count as a crossing;
# filters integration-noise grazing near the target corner, where the first
# component crosses with a cubically flat tangency
EXIT_DEAD_BAND = 1e-11

# exit points closer than this to (0,0,1) count as hitting the target
TARGET_BALL = 1e-8

# per-step renormalization correction above this aborts the integrator
RENORM_LIMIT = 1e-6
