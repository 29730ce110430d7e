import os

# Defaults; environment variables override, document options and CLI flags override both.

DEFAULT_DEGREE_BOUND = int(os.getenv("IDEXP_DEGREE_BOUND", "64"))
DEFAULT_SEARCH_DEPTH = int(os.getenv("IDEXP_SEARCH_DEPTH", "3"))

# candidate flags tried by the ridge search in small characteristic
RIDGE_SEARCH_BUDGET = int(os.getenv("IDEXP_RIDGE_BUDGET", "20000"))

# nodes expanded by probe_equivalence
PROBE_NODE_BUDGET = int(os.getenv("IDEXP_PROBE_BUDGET", "5000"))

SATURATION_MAX_COMPONENTS = int(os.getenv("IDEXP_SATURATION_MAX", "64"))

# exhaustive coefficient search over F_p^r in solve_vertex
VERTEX_SEARCH_BUDGET = int(os.getenv("IDEXP_VERTEX_BUDGET", "4096"))

LOG_LEVEL = os.getenv("IDEXP_LOG_LEVEL", "WARNING")

DEFAULT_SVG_PATH = "polyhedron.svg"
