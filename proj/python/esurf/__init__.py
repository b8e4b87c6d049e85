"""EDU segmentation with random forests over positional lexical and
character-subsequence features.

The heavy lifting lives in the compiled `_esurf` extension; this package
re-exports its public names.
"""

from ._esurf import (  # noqa: F401
    MODEL_FORMAT_VERSION,
    CandidateWindow,
    CorpusError,
    CorpusFormat,
    DataError,
    Document,
    EduSpan,
    EvalError,
    FeatureEntry,
    FeatureKey,
    FeatureKind,
    FeatureSpace,
    FilterBounds,
    ForestModel,
    ForestParams,
    LabeledVector,
    MetricsReport,
    ModelIoError,
    Region,
    Segmentation,
    Sentence,
    SparseVector,
    Token,
    balanced_sample,
    boundary_metrics,
    build_feature_space,
    char_subsequences,
    classification_metrics,
    extract_all_windows,
    extract_windows,
    generate_synthetic_corpus,
    gini,
    load_edu_lines,
    load_gold_corpus,
    load_pipe_marked,
    load_plain,
    load_plain_corpus,
    render_pipe_marked,
    render_records,
    run_cli,
    segment_document,
    tokenize,
    train_forest,
    vectorize,
    window_keys,
    write_pipe_marked,
)

__version__ = "0.1.0"
