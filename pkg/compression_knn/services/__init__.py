"""Services package for compression_knn."""

from compression_knn.services.classifier import (
    CompressionKnnClassifier,
    classify_batch,
    knn_predict,
)
from compression_knn.services.compressor import compress_len, compress_len_concat, gzip_member
from compression_knn.services.dataset_service import (
    DatasetService,
    ingest_dataset,
    load_corpus,
)
from compression_knn.services.evaluation_service import model_size, run_sweep, stratified_split
from compression_knn.services.imageprep import canonicalize, decode_image, resize, serialize, to_grayscale
from compression_knn.services.ncd import distance_matrix, ncd
from compression_knn.services.report_service import (
    read_results_csv,
    render_svg,
    summary_lines,
    write_results_csv,
)

__all__ = [
    "CompressionKnnClassifier",
    "DatasetService",
    "canonicalize",
    "classify_batch",
    "compress_len",
    "compress_len_concat",
    "decode_image",
    "distance_matrix",
    "gzip_member",
    "ingest_dataset",
    "knn_predict",
    "load_corpus",
    "model_size",
    "ncd",
    "read_results_csv",
    "render_svg",
    "resize",
    "run_sweep",
    "serialize",
    "stratified_split",
    "summary_lines",
    "to_grayscale",
    "write_results_csv",
]
