"""looklab: shop-the-look retrieval pipeline.

Turns a product display page (or a user-uploaded photo) into per-article
similar-product recommendations: full-shot selection via human keypoints,
front-pose filtering, fashion article detection with an active-learning
feedback loop, triplet-network embeddings, and top-K retrieval.
"""

__version__ = "0.1.0"
