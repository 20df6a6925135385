from src.api.endpoints import distributions, iceberg, survival, transforms, verify

__all__ = ["distributions", "iceberg", "survival", "transforms", "verify"]
