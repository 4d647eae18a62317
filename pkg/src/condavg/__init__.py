"""Learning neighborhood-average labels on finite directed graphs.

The package provides the graph and concept-class machinery, the
conditional-average target and its exact risk, combinatorial complexity
parameters with certifying witnesses, one-inclusion prediction, the
learners themselves, hard-instance generators, and a fully seeded
experiment harness with a CLI front end (``condavg``).
"""

from .concepts import (
    Concept,
    ExplicitClass,
    FullClass,
    PartialConcept,
    SingletonClass,
    ThresholdClass,
    concept_class_from_json,
    concept_class_to_json,
    encode_partial_class,
    encode_partial_concept,
    first_consistent_concept,
    is_realizable,
    load_concept_class,
    partial_concepts_from_json,
    restrict,
    shatters,
    vc_dimension,
)
from .errors import (
    BudgetExceededError,
    CondavgError,
    ConfigError,
    EnumerationGuardError,
    GraphFormatError,
    RealizabilityError,
    ResourceLimitError,
    UndefinedConditionalError,
)
from .graphs import (
    DirectedGraph,
    complete_bidirected_graph,
    edgeless_graph,
    graph_from_json,
    graph_to_json,
    greedy_independent_set,
    independence_number,
    induced_subgraph,
    is_independent,
    isolated_vertices,
    load_graph,
    max_independent_extension,
    path_graph,
    star_graph,
    tournament_graph,
)
from .hardness import (
    BichromaticInstance,
    ShatteredInstance,
    gen_bichromatic_instance,
    gen_shattered_instance,
    perturbed_distribution,
    sample_sign_string,
)
from .harness import (
    AggregateRow,
    ExperimentConfig,
    ResolvedSweep,
    SweepResult,
    TrialRecord,
    emit_plot_data,
    load_config,
    run_sweep,
    run_trial,
    sweep_csv,
    write_plot_data,
    write_sweep_csv,
    write_text_atomic,
)
from .learner import (
    AmplifiedModel,
    ErmModel,
    NeighborAverageModel,
    TrainedModel,
    choose_k,
    fit_amplified,
    fit_erm,
    fit_neighbor_average,
    median_combine,
)
from .measure import (
    Distribution,
    LabeledSample,
    balanced_vertex,
    conditional_average,
    degree_mass_sums,
    distribution_from_json,
    distribution_to_json,
    draw_sample,
    empirical_mean_sq_error,
    light_mass,
    light_removal_witness,
    load_distribution,
    pointwise_loss,
    risk,
)
from .rng import mix_seed, philox, splitmix64
from .oig import (
    OneInclusionGraph,
    Orientation,
    PatternClass,
    build_oig,
    canonical_orientation,
    loo_error,
    oig_predict,
    orient_min_max_outdegree,
)
from .params import (
    FamilyParams,
    ParamReport,
    alpha1,
    alpha2_class,
    alpha2_concept,
    bichromatic_vertices,
    compute_param_report,
    family_params,
    theoretical_sample_bound,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
