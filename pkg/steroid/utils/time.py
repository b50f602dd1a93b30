import time


def get_time_stamp() -> float:
    return time.perf_counter()


class Stopwatch:
    def __init__(self):
        self.started = get_time_stamp()

    def elapsed(self) -> float:
        return get_time_stamp() - self.started
