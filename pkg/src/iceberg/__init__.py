"""Iceberg words, rank-one words and Pascal codings, with exact subword
complexity and checks of the bounds relating them."""

from .builders import (IcebergSchedule, LevelSpec, RandomSpec, build_iceberg, build_rank_one,
                       pascal_block, pascal_tower_profile, pascal_word, random_schedule,
                       rank_one_words)
from .complexity import (ComplexityProfile, FrequencyTable, SuffixAutomaton, complexity,
                         complexity_profile, empirical_frequencies, language,
                         saturated_complexity)
from .matching import (DReport, MatchStats, TripleConfig, check_D, eta, lower_bound_check,
                       match_probability_mc, overlapping_subset, sigma_set,
                       triple_match_condition, triple_word)
from .scaling import CoverStats, greedy_cover, pascal_scale_prediction
from .words import (Occurrence, classify_occurrences, cyclic_find, dbar, is_cyclic_subword,
                    letter_fraction, rotate)

__version__ = "0.1.0"
