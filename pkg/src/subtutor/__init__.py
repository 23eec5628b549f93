"""Incremental teaching simulator for recipe ingredient substitution.

Replays substitution examples one at a time under a tutoring policy,
trains incremental learners on knowledge-enriched ingredient
representations, and measures learning-curve efficiency with
information-retrieval metrics (hit@k, MRR).
"""

from .corpus import (Dataset, FilterReport, SubstitutionExample, Vocabulary,
                     canonicalize, filter_degenerate, load_aliases,
                     load_dataset, load_vocabulary, save_dataset,
                     save_vocabulary)
from .errors import ConfigError, DataError, SubtutorError
from .evaluation import (EvalRecord, aggregate_runs, evaluate,
                         metrics_from_ranks, target_ranks)
from .kernels import BACKEND as KERNEL_BACKEND
from .knowledge import (ClassHierarchy, PropertyAssignment, expand_hops,
                        hop_weight, link_and_expand, load_assignments,
                        load_hierarchy, prune_singletons, save_assignments,
                        tfidf_link)
from .learners import (FrequencyLearner, FrequencyState, Ranking,
                       ScoringSnapshot, VectorLearner, VectorState,
                       load_state, make_learner, rank_baseline, rank_vector,
                       save_state)
from .representation import (DescriptiveWeights, RepresentationProvider,
                             build_provider, compute_descriptive_weights,
                             query_representation)
from .runner import ExperimentConfig, load_config, run_experiment
from .synth import SynthConfig, SynthRule, generate, write_synth_files
from .tutoring import (balanced_order, balanced_schedule, make_order,
                       random_order, save_order)
from .vectors import FeatureVector, weighted_sum

__version__ = "0.1.0"
