"""Range-emptiness filters over 64-bit integer keys.

Two structures are provided. GrafiteFilter hashes keys into a reduced
universe with a locality-preserving pairwise-independent hash and stores the
sorted codes in an Elias-Fano sequence; it guarantees no false negatives and
a false positive rate that depends only on the query range size, never on
the key or query distribution. BucketingFilter is a simpler heuristic that
records which fixed-width universe buckets are occupied; it is tiny and fast
but degrades under query-key correlation.
"""

from .bucketing import BucketingFilter
from .eliasfano import EliasFanoSequence
from .grafite import GrafiteFilter
from .modhash import PairwiseHash, locality_hash, make_pairwise_hash, q_eval

__all__ = [
    "BucketingFilter",
    "EliasFanoSequence",
    "GrafiteFilter",
    "PairwiseHash",
    "locality_hash",
    "make_pairwise_hash",
    "q_eval",
]

__version__ = "0.1.0"
