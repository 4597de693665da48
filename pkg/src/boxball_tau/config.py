from __future__ import annotations

OUTPUT_FORMATS = ("text", "json", "csv")
DEFAULT_FORMAT = "text"

INFINITY_SPELLING = "inf"
AUTO_PAD = "auto"

# Tableau words are written one digit per box.
MAX_TEXT_LETTER = 9

# Normal ordering walks an orbit of up to N! reorderings.
MAX_NORMAL_ORDER_FACTORS = 6

DIRECT_TAU_ROW_LIMIT = 20

SUITE_CHECKS = ("triple", "bilinear", "ivp", "kkr", "energy")
DEFAULT_SUITE_RANK = 2
DEFAULT_SUITE_LENGTH = 5
DEFAULT_SEED = 0
