"""Bangla document categorization.

Preprocessing, length-normalized TF-IDF features, four classifiers (naive
Bayes, KNN, C4.5, SVM) and a stratified cross-validation harness.
"""

__version__ = "0.1.0"

from .corpus import Corpus, LabeledDocument, generate_synthetic_corpus, load_corpus
from .errors import BanglaTCError, DecodeError, InputError, ValidationError
from .features import Dataset, SparseVector, Vocabulary, vectorize_corpus
from .preprocess import PipelineConfig, preprocess_document

__all__ = [
    "BanglaTCError", "Corpus", "Dataset", "DecodeError", "InputError", "LabeledDocument",
    "PipelineConfig", "SparseVector", "ValidationError", "Vocabulary", "__version__",
    "generate_synthetic_corpus", "load_corpus", "preprocess_document", "vectorize_corpus",
]
