"""A tour of tree-pair elements over the local group Z/2 acting on 2 children.

Run with ``python3 demos/01_elements.py`` or step through the cells in an
editor that understands ``# %%`` markers.
"""

# %% The local group and a first element
import random

from symthompson.element import (
    act,
    compose,
    expand,
    format_element,
    inverse,
    iota,
    pi,
    pi_section,
    random_element,
    reduce,
    retract,
)
from symthompson.textio import parse_element, parse_point, stock_group

group = stock_group("stock:z2:2")
print("order of H:", group.order, "| q injective:", group.is_faithful())

x, _ = parse_element("map 0 -> 0 : a\nmap 1 -> 1 : id\n", group)
swap, _ = parse_element("map 0 -> 1 : id\nmap 1 -> 0 : id\n", group)
print(format_element(x, "stock:z2:2"), end="")

# %% Composition, inverses and reduction
# compose(g, f) applies f first.
print(format_element(compose(swap, x), "stock:z2:2"), end="")
print(format_element(compose(x, inverse(x)), "stock:z2:2"), end="")

# expanding a leaf gives another representative of the same element
bigger = expand(expand(x, "0"), "1")
print(len(bigger.domain), "leaves before reduction,", len(reduce(bigger).domain), "after")

# %% Acting on eventually periodic points
point = parse_point("0(10)", 2)
for name, e in [("x", x), ("swap", swap)]:
    print(name, "sends", point, "to", act(e, point))

# %% The maps pi, iota and r
print("pi(x) forgets the kernel of q:")
print(format_element(pi(x), "image:stock:z2:2"), end="")
back = pi_section(pi(x), group)
print("pi(section(pi(x))) == pi(x):", pi(back).same_representative(pi(x)))

a = group.generator_elements()[0]
print("r(iota(a)) =", retract(iota(a)))

# %% Random elements respect the retraction law for unlabeled factors
rng = random.Random(7)
hits = 0
for _ in range(200):
    g = random_element(group, rng, 3)
    u = random_element(group, rng, 3, unlabeled=True)
    hits += retract(compose(u, g)) == retract(g)
print(hits, "of 200 samples satisfy r(g then u) = r(g)")
