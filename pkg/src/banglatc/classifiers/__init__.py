"""Naive Bayes, KNN, C4.5 and SVM text classifiers behind one contract."""

from .knn import KnnModel, euclidean_distance, knn_predict, knn_scores, train_knn, tune_k
from .model import (
    CLASSIFIERS,
    Params,
    TextClassifier,
    fit_text_classifier,
    kind_of,
    predict_many,
    scores_many,
    train,
)
from .nb import NbModel, nb_scores, predict_nb, train_nb
from .svm import (
    ConvergenceWarning,
    Kernel,
    SvmBinaryModel,
    SvmModel,
    kernel_eval,
    svm_decisions,
    svm_predict,
    train_binary_svm,
    train_svm,
)
from .tree import Leaf, Split, TreeNode, best_split, train_c45, tree_predict

__all__ = [
    "CLASSIFIERS", "ConvergenceWarning", "Kernel", "KnnModel", "Leaf", "NbModel", "Params",
    "Split", "SvmBinaryModel", "SvmModel", "TextClassifier", "TreeNode", "best_split",
    "euclidean_distance", "fit_text_classifier", "kernel_eval", "kind_of", "knn_predict",
    "knn_scores", "nb_scores", "predict_many", "predict_nb", "scores_many", "svm_decisions",
    "svm_predict", "train", "train_binary_svm", "train_c45", "train_knn", "train_nb",
    "train_svm", "tree_predict", "tune_k",
]
