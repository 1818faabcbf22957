"""dB <-> linear conversions. Configs speak dB; all internal math is linear."""


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x_lin: float) -> float:
    import math

    if x_lin <= 0.0:
        raise ValueError(f"cannot convert non-positive value {x_lin} to dB")
    return 10.0 * math.log10(x_lin)
