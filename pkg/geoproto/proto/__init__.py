""" The ``geoproto.proto`` package initialization module. """

from geoproto.proto.proto import (
    CandidatePool,
    Explanation,
    PrototypeBank,
    PrototypeConfig,
    PrototypeMatch,
    PrototypeUtility,
)

from geoproto.proto.utility.training import PrototypeTrainer, PrototypeTrainingUtility, TrainingConfig, TrainingResult
