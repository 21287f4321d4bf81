"""Seeded random expressions over the parser grammar, kept inside safe domains."""

import random

LEAVES = ("x", "x", "1.5", "0.25", "pi", "e", "3")
UNARY = (
    "sin({a})",
    "cos({a})",
    "exp({a}/4)",
    "sqrt(1 + ({a})^2)",
    "log(2 + cos({a}))",
    "({a})^2",
    "({a})^3",
    "(1 + ({a})^2)^1.5",
    "tan(0.3*sin({a}))",
    "-({a})",
    "abs({a})^3",
)
BINARY = (
    "({a} + {b})",
    "({a} - {b})",
    "({a} * {b})",
    "({a}) / (2 + sin({b}))",
    "{a}*x^2",
)


def random_expression(rng: random.Random, depth: int = 3) -> str:
    if depth == 0 or rng.random() < 0.15:
        return rng.choice(LEAVES)
    if rng.random() < 0.5:
        return rng.choice(UNARY).format(a=random_expression(rng, depth - 1))
    return rng.choice(BINARY).format(a=random_expression(rng, depth - 1), b=random_expression(rng, depth - 1))


MALFORMED = (
    "",
    "sin(",
    "x +",
    "2**x",
    "foo(x)",
    "sin x",
    "(x",
    "x)",
    "1.2.3",
    "x^",
    "sin()",
    "éx",
    "@",
    "3x",
    "x ^ ^ 2",
    "sin(x,2)",
    "log",
    "()",
    "1e",
    "x $ 2",
)

TOKENS = ("x", "1", "2.5", "+", "-", "*", "/", "^", "(", ")", "sin", "exp", " ", "pi", ",", "e", ".", "abs")


def random_garbage(rng: random.Random, length: int = 8) -> str:
    return "".join(rng.choice(TOKENS) for _ in range(rng.randint(0, length)))
