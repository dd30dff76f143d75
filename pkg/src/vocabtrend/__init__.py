"""Per-word appearance forecasting for yearly exam text corpora.

Pipeline: clean and tokenize one text file per year, lemmatize and count
every word into a word-by-year frequency matrix, optionally screen and
rank-split the vocabulary, then train one small LSTM regressor per sliding
window size and merge the per-window next-year predictions into a single
0..100 score per word. Evaluation compares scored words against the
vocabulary of a later, realized exam.
"""

from .cooccurrence import (
    CorrelationMatrix,
    OccurrenceMatrix,
    correlation_matrix,
    occurrence_matrix,
)
from .corpus import (
    RemovalRuleSet,
    YearDocument,
    clean_text,
    default_rules,
    extract_sentences,
    load_corpus,
    load_removal_rules,
    tokenize,
)
from .errors import InputError, NumericError, VocabTrendError
from .evaluation import (
    EvalReport,
    Segment,
    build_report,
    extract_exam_vocab,
    prediction_metrics,
    score_histogram,
    segment_analysis,
)
from .forecast import (
    DEFAULT_ENSEMBLE,
    AiScoreTable,
    EnsembleSpec,
    WindowSet,
    ai_score,
    build_windows,
    predict_next,
    train_ensemble,
    train_model,
)
from .lexicon import (
    FrequencyMatrix,
    LemmaMap,
    ScreenList,
    apply_screening,
    build_frequency_matrix,
    diff_vocabularies,
    lemmatize,
    load_lemma_map,
    load_screen_list,
    rank_split,
    read_frequency_csv,
    write_frequency_csv,
)
from .neuralnet import (
    AdamState,
    ForwardCache,
    Hyperparams,
    ModelParams,
    adam_step,
    backward,
    forward,
    grad_check,
    init_params,
    load_checkpoint,
    logcosh_loss,
    numeric_gradients,
    save_checkpoint,
)
__version__ = "0.1.0"
