""" The ``geoproto`` package initialization module. """
