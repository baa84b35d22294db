""" The ``geoproto.base.utility`` package ``parallel`` module. """

from os import cpu_count
from typing import Callable, List, Optional, Sequence, TypeVar

from pqdm.threads import pqdm


ArgumentType = TypeVar("ArgumentType")
ResultType = TypeVar("ResultType")


class BaseParallelUtility:
    """ The base parallel execution utility class. """

    @staticmethod
    def resolve_number_of_threads(
            number_of_threads: Optional[int] = None
    ) -> int:
        """
        Resolve the number of worker threads.

        :parameter number_of_threads: The requested number of worker threads. The value `None` indicates that the
            available parallelism should be utilized.

        :returns: The number of worker threads.
        """

        if number_of_threads is None:
            return max(cpu_count() or 1, 1)

        return max(int(number_of_threads), 1)

    @staticmethod
    def map_in_order(
            function: Callable[[ArgumentType], ResultType],
            arguments: Sequence[ArgumentType],
            number_of_threads: Optional[int] = None,
            description: Optional[str] = None
    ) -> List[ResultType]:
        """
        Apply a function to every argument on a worker pool and return the results in input order.

        The first failure aborts the map and is re-raised.

        :parameter function: The function.
        :parameter arguments: The arguments.
        :parameter number_of_threads: The number of worker threads. The value `None` indicates that the available
            parallelism should be utilized.
        :parameter description: The description of the disabled progress bar.

        :returns: The results in input order.
        """

        arguments = list(arguments)

        if len(arguments) == 0:
            return list()

        number_of_threads = min(
            BaseParallelUtility.resolve_number_of_threads(
                number_of_threads=number_of_threads
            ),
            len(arguments)
        )

        if number_of_threads == 1:
            return [
                function(argument)
                for argument in arguments
            ]

        return list(pqdm(
            array=arguments,
            function=function,
            n_jobs=number_of_threads,
            exception_behaviour="immediate",
            desc=description,
            disable=True
        ))
