"""k-nearest-neighbour prediction over NCD distances."""

import logging
import math
from collections import Counter
from typing import Dict, List, Optional, Sequence

from compression_knn.config import DEFAULT_K, CompressorConfig
from compression_knn.errors import InvalidK, LengthMismatch
from compression_knn.models.corpus import LabeledCorpus
from compression_knn.models.prediction import Neighbor, Prediction
from compression_knn.services.compressor import DEFAULT_CONFIG
from compression_knn.services.ncd import distance_matrix

logger = logging.getLogger(__name__)


def knn_predict(
    distances: Sequence[float],
    labels: Sequence[str],
    k: int = DEFAULT_K,
    item_ids: Optional[Sequence[str]] = None,
    query_id: Optional[str] = None,
) -> Prediction:
    """Majority vote among the ``k`` nearest training items.

    Tie-break cascade:
      - neighbour selection: smaller distance, then lower training index
      - vote: higher count, then smaller mean distance within the label,
        then the lexicographically smaller label

    Args:
        distances: Distance from every training item to the query
        labels: Label of every training item
        k: Number of neighbours, >= 1
        item_ids: Optional identifiers of the training items
        query_id: Optional identifier of the query

    Returns:
        The prediction with its neighbours and vote tally
    """
    if k < 1:
        raise InvalidK(f"k must be >= 1, got {k}")
    if len(distances) != len(labels):
        raise LengthMismatch(
            f"{len(distances)} distances but {len(labels)} labels"
        )
    if len(distances) == 0:
        raise LengthMismatch("at least one training distance is required")
    if item_ids is not None and len(item_ids) != len(labels):
        raise LengthMismatch(f"{len(item_ids)} item ids but {len(labels)} labels")

    order = sorted(range(len(distances)), key=lambda i: (distances[i], i))
    chosen = order[: min(k, len(order))]
    neighbors = [
        Neighbor(
            index=i,
            item_id=item_ids[i] if item_ids is not None else str(i),
            label=labels[i],
            distance=float(distances[i]),
        )
        for i in chosen
    ]

    tally = Counter(n.label for n in neighbors)
    per_label: Dict[str, List[float]] = {}
    for n in neighbors:
        per_label.setdefault(n.label, []).append(n.distance)

    def vote_key(label: str):
        mean = math.fsum(per_label[label]) / tally[label]
        return (-tally[label], mean, label)

    winner = min(tally, key=vote_key)
    return Prediction(
        label=winner,
        neighbors=neighbors,
        tally=dict(tally),
        k=k,
        query_id=query_id,
    )


def classify_batch(
    corpus: LabeledCorpus,
    queries: Sequence[bytes],
    k: int = DEFAULT_K,
    cfg: CompressorConfig = DEFAULT_CONFIG,
    threads: int = 1,
    query_ids: Optional[Sequence[str]] = None,
) -> List[Prediction]:
    """Distance matrix against the corpus, then one kNN vote per query column.

    Args:
        corpus: Labeled training corpus
        queries: Query byte sequences
        k: Number of neighbours
        cfg: Compressor settings
        threads: Worker threads for the distance matrix
        query_ids: Optional query identifiers

    Returns:
        One prediction per query, in query order
    """
    if k < 1:
        raise InvalidK(f"k must be >= 1, got {k}")
    ids = [item.item_id for item in corpus.items]
    matrix = distance_matrix(corpus.sequences, queries, cfg, threads=threads, row_ids=ids)
    labels = corpus.labels
    predictions = [
        knn_predict(
            matrix.column(j),
            labels,
            k,
            item_ids=ids,
            query_id=query_ids[j] if query_ids is not None else None,
        )
        for j in range(matrix.cols)
    ]
    logger.debug("classified %d quer(ies) against %d item(s)", len(queries), len(corpus))
    return predictions


class CompressionKnnClassifier:
    """
    Parameter-less classifier: the training corpus is the whole model.

    ``fit`` only stores the corpus; every ``predict`` compresses the queries
    against it.
    """

    def __init__(
        self, k: int = DEFAULT_K, cfg: CompressorConfig = DEFAULT_CONFIG, threads: int = 1
    ):
        """Initialize the classifier.

        Args:
            k: Number of neighbours
            cfg: Compressor settings
            threads: Worker threads for distance computation
        """
        if k < 1:
            raise InvalidK(f"k must be >= 1, got {k}")
        self.k = k
        self.cfg = cfg
        self.threads = threads
        self.corpus: Optional[LabeledCorpus] = None

    def fit(self, corpus: LabeledCorpus) -> "CompressionKnnClassifier":
        self.corpus = corpus
        return self

    def predict(
        self, queries: Sequence[bytes], query_ids: Optional[Sequence[str]] = None
    ) -> List[Prediction]:
        if self.corpus is None:
            raise RuntimeError("fit() must be called before predict()")
        return classify_batch(
            self.corpus, queries, self.k, self.cfg, threads=self.threads, query_ids=query_ids
        )
