from .losses import (
    DEFAULT_ALPHA,
    DEFAULT_MARGIN,
    DimensionMismatchError,
    TripletLossConfig,
    embedding_norm_loss,
    sq_euclidean,
    total_loss,
    total_loss_grad,
    triplet_margin_loss,
)
from .mining import MiningError, mine_semi_hard
from .triplets import (
    ImagePair,
    Triplet,
    build_triplets,
    load_pairs_manifest,
    save_pairs_manifest,
)
from .model import (
    EmbeddingModel,
    FIXTURE_EMBEDDING_DIM,
    PAPER_EMBEDDING_DIM,
    TINY_TRAIN_CONFIG,
    TrainConfig,
    embed_image,
    load_embedding_model,
    load_train_config,
    read_vector_record,
    save_embedding_model,
    save_train_config,
    train_embedding_model,
    write_vector_record,
)

__all__ = [
    "DEFAULT_ALPHA",
    "DEFAULT_MARGIN",
    "DimensionMismatchError",
    "EmbeddingModel",
    "FIXTURE_EMBEDDING_DIM",
    "ImagePair",
    "MiningError",
    "PAPER_EMBEDDING_DIM",
    "TINY_TRAIN_CONFIG",
    "TrainConfig",
    "Triplet",
    "TripletLossConfig",
    "build_triplets",
    "embed_image",
    "embedding_norm_loss",
    "load_embedding_model",
    "load_pairs_manifest",
    "load_train_config",
    "mine_semi_hard",
    "read_vector_record",
    "save_embedding_model",
    "save_pairs_manifest",
    "save_train_config",
    "sq_euclidean",
    "total_loss",
    "total_loss_grad",
    "train_embedding_model",
    "triplet_margin_loss",
    "write_vector_record",
]
