from .descriptors import DescriptorSet, PatchParams, extract_descriptors
from .pca import PcaModel, train_pca
from .gmm import GmmModel, gmm_log_likelihood, gmm_log_responsibilities, train_gmm
from .fisher import FisherVector, encode_fisher
from .io import load_feature_artifact, save_feature_artifact

__all__ = [
    "DescriptorSet",
    "PatchParams",
    "extract_descriptors",
    "PcaModel",
    "train_pca",
    "GmmModel",
    "train_gmm",
    "gmm_log_likelihood",
    "gmm_log_responsibilities",
    "FisherVector",
    "encode_fisher",
    "save_feature_artifact",
    "load_feature_artifact",
]
