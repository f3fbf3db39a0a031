"""snpsim: simulator and benchmark harness for spiking neural P systems with
delays, built on interchangeable transition-matrix storage formats."""

from .engine import (
    EngineError,
    Format,
    HaltReason,
    NegativeSpikes,
    Prepared,
    RecordLevel,
    SimOptions,
    SimState,
    SpikingVector,
    Trace,
    format_trace,
    prepare,
    simulate,
    simulate_prepared,
    step_compressed,
    step_ell,
    step_sparse,
    sv_calc,
    update_delays,
)
from .generators import (
    InvalidInstance,
    SortInstance,
    SubsetSumInstance,
    gen_random,
    gen_sort,
    gen_subset_sum,
    sort_result,
    subset_sum_accepted,
)
from .matrices import (
    EllMatrix,
    NeuronRuleMap,
    RuleVector,
    SparseMatrix,
    SynapseMatrix,
    build_compressed,
    build_ell,
    build_rule_vector,
    build_sparse,
    storage_bytes,
    storage_elements,
)
from .model import (
    InvalidRule,
    ModelError,
    ReflexiveSynapse,
    RegexKind,
    Rule,
    SNPSystem,
    SpikeRegex,
    SystemStats,
    UnknownNeuron,
    at_least,
    exactly,
)
from .modelfile import ModelFileError, parse_model, serialize_model
from .oracle import oracle_simulate, oracle_step
from .selection import FirstApplicable, SeededRandom, Selection

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
