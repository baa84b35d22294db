""" The ``geoproto.landmarks.utility`` package initialization module. """

from geoproto.landmarks.utility.kmeans import KMeansLandmarkUtility
