"""biaslens: surface visual bias in news coverage and act on it.

The pipeline clusters the images that different outlets attach to one news
story (dense patch descriptors -> PCA -> diagonal-covariance GMM -> Fisher
vectors -> K-means), lets an activist compose an image-macro collage from
suspicious clusters, and runs a supervised, rate-limited bot campaign that
exposes the finding to social-media users and asks what should be done about
it. Everything is testable offline against file fixtures and a deterministic
mock platform.
"""

__version__ = "0.1.0"
