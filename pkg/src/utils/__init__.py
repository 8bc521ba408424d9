from utils import bench_logger, errors, seeding  # noqa: D104

__all__ = [
    "bench_logger",
    "errors",
    "seeding",
]
