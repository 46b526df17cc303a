"""Semantic networks of emotion words and their Markov-chain community structure."""

from .graph import SemanticNetwork, MarkovModel, transition_matrix, stationary, markov_model, dissimilarity
from .lexicon import EmotionLexicon, Partition, Wheel, builtin_lexicon, load_lexicon, wheel_partition, petal_pair_sets
from .mdmc import (
    CommunityNetwork,
    DecomposeConfig,
    Decomposition,
    active_count,
    alpha_sweep,
    decompose,
    decompose_best,
    hard_assign,
    omega,
    posterior,
)
from .metrics import globality, locality, locality_report, nmi, wheel_nmi
from .mds import Layout, classical_mds, omega_layout

__version__ = "0.1.0"
