"""Toolkit for building, reviewing, and evaluating Chinese idiom paraphrase data.

The pipeline: detect idioms with a lexicon, split a parallel corpus by idiom
presence, back-translate the idiomatic half into pseudo paraphrase pairs,
mine idiom interpretations from edit scripts, render model inputs, serve the
pairs for human review, and score system outputs.
"""
from .corpus import CorpusSplit, ParallelPair, TokenSeq, read_pairs, split_corpus, tokenize, write_pairs
from .editdiff import (
    DELETE,
    INSERT,
    KEEP,
    EditRun,
    EditScript,
    InterpretationDictionary,
    build_dictionary,
    diff,
    edit_distance,
    extract_interpretations,
)
from .inputs import (
    BLOCK_SEP,
    MASK_TOKEN,
    SENTENCE_SEP,
    InfillInput,
    SimplifyResult,
    SpanProviderError,
    apply_infill,
    build_infill_input,
    build_knowledge_input,
    recursive_simplify,
)
from .lexicon import (
    Idiom,
    IdiomLexicon,
    IdiomOccurrence,
    contains_idiom,
    detect_idioms,
    load_lexicon,
)
from .metrics import CorpusStats, EvalReport, bleu, compute_stats, evaluate, paraphrase_proportion, rouge_n
from .paraphrase import (
    DictionaryBackend,
    HttpBackend,
    IdentityBackend,
    ParaphraseError,
    ParaphraseResult,
    load_backend,
    paraphrase,
)
from .pseudo import (
    BuildReport,
    CipPair,
    HttpTranslator,
    Revision,
    TableTranslator,
    TranslationError,
    build_pseudo_pairs,
    deduplicate,
    load_translator,
    read_cip_pairs,
    write_cip_pairs,
)
from .review import (
    ReviewStore,
    RevisionRejected,
    StoreError,
    UnknownPairError,
    VersionConflictError,
    create_app,
    serve,
)

__version__ = "0.1.0"

__all__ = [
    "BLOCK_SEP",
    "BuildReport",
    "CipPair",
    "CorpusSplit",
    "CorpusStats",
    "DELETE",
    "DictionaryBackend",
    "EditRun",
    "EditScript",
    "EvalReport",
    "HttpBackend",
    "HttpTranslator",
    "Idiom",
    "IdiomLexicon",
    "IdiomOccurrence",
    "IdentityBackend",
    "InfillInput",
    "INSERT",
    "InterpretationDictionary",
    "KEEP",
    "MASK_TOKEN",
    "ParallelPair",
    "ParaphraseError",
    "ParaphraseResult",
    "Revision",
    "ReviewStore",
    "RevisionRejected",
    "StoreError",
    "SENTENCE_SEP",
    "SimplifyResult",
    "SpanProviderError",
    "TableTranslator",
    "TokenSeq",
    "TranslationError",
    "UnknownPairError",
    "VersionConflictError",
    "apply_infill",
    "bleu",
    "build_dictionary",
    "build_infill_input",
    "build_knowledge_input",
    "build_pseudo_pairs",
    "compute_stats",
    "contains_idiom",
    "create_app",
    "deduplicate",
    "detect_idioms",
    "diff",
    "edit_distance",
    "evaluate",
    "extract_interpretations",
    "load_backend",
    "load_lexicon",
    "load_translator",
    "paraphrase",
    "paraphrase_proportion",
    "read_cip_pairs",
    "read_pairs",
    "recursive_simplify",
    "rouge_n",
    "serve",
    "split_corpus",
    "tokenize",
    "write_cip_pairs",
    "write_pairs",
]
