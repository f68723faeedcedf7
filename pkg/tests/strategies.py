from hypothesis import strategies as st

from permstab.perm import Permutation
from permstab.words import FreeWord


def perms(degree: int):
    return st.permutations(list(range(degree))).map(lambda p: Permutation._raw(tuple(p)))


def words(max_len: int = 8, rank: int = 2):
    letters = st.sampled_from([k for i in range(1, rank + 1) for k in (i, -i)])
    return st.lists(letters, max_size=max_len).map(FreeWord)
