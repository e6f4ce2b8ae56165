import abc


class BaseIOWrapper(abc.ABC):
    """Abstract base class for io wrapper.

    The wrapper serves the following purposes

    * Unified stdout/file output of reports and trajectories

    """

    @abc.abstractmethod
    def write(self, object, serializer=None):
        """
        Serialize object and write to target.
        """
        pass

    @abc.abstractmethod
    def read(self):
        pass

    @staticmethod
    def serialize(object, serializer=None) -> str:
        if isinstance(object, str):
            return object
        elif serializer:
            return serializer(object)
        elif hasattr(object, "__serialize__"):
            return object.__serialize__()
        return str(object)
