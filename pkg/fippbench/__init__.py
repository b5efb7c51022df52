__all__ = ["codec", "streams", "sigma00", "setfn", "fipp", "fan", "cub", "cli"]
