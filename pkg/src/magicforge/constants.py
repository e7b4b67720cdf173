"""Physical constants used across the package.

Values are CODATA 2018, fixed to 12 significant digits so results are
reproducible independent of any constants library version. All SI.
"""

PLANCK = 6.62607015e-34            # J s (exact)
HBAR = 1.05457181765e-34           # J s (h / 2 pi)
ELEMENTARY_CHARGE = 1.602176634e-19  # C (exact)
BOHR_MAGNETON = 9.27401007830e-24  # J/T
VACUUM_PERMITTIVITY = 8.85418781280e-12  # F/m
COULOMB_CONSTANT = 8.98755178737e9  # N m^2 / C^2, 1/(4 pi eps0)
ATOMIC_MASS = 1.66053906660e-27    # kg
