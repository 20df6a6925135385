"""Dependency injection providers for repositories and services."""

from src.repositories.artifacts import ArtifactRepository, FileArtifactRepository
from src.services.exact import ExactSurvivalService
from src.services.icebergsim import IcebergSimulationService
from src.services.ordering import OrderingService
from src.services.probmodel import ProbModelService
from src.services.survival import SurvivalEvaluationService
from src.services.verification import VerificationService


def get_artifact_repository() -> ArtifactRepository:
    return FileArtifactRepository()


def get_probmodel_service() -> type[ProbModelService]:
    return ProbModelService


def get_exact_service() -> type[ExactSurvivalService]:
    return ExactSurvivalService


def get_evaluation_service() -> type[SurvivalEvaluationService]:
    return SurvivalEvaluationService


def get_ordering_service() -> type[OrderingService]:
    return OrderingService


def get_simulation_service() -> type[IcebergSimulationService]:
    return IcebergSimulationService


def get_verification_service() -> type[VerificationService]:
    return VerificationService
