# %% [markdown]
# # The emotion vocabulary and its wheel
#
# The package ships 48 emotion words: eight primary emotions, a strong and a
# weak variant of each, and 24 secondary (mixed) emotions.  Primary words and
# their variants form eight *petals*; each petal faces an opposite petal.

# %%
from emonet.lexicon import builtin_lexicon, petal_pair_sets, wheel_partition, wheel_partition_all

lex = builtin_lexicon()
print(len(lex), "words")
for cat in ("primary", "strong_derived", "weak_derived", "secondary"):
    print(f"{cat:15s}", ", ".join(w.english for w in lex.by_category(cat)))

# %% [markdown]
# Petals are stored as (strong, primary, weak) triples, in wheel order.

# %%
wheel = lex.wheel
for k, petal in enumerate(wheel.petals):
    facing = wheel.names[wheel.opposite[k]]
    words = [lex.word(i).english for i in petal]
    print(f"{wheel.names[k]:13s} {words}  faces {facing}")

# %% [markdown]
# Two reference partitions are used when scoring detected communities:
# the 24 petal words alone, or all 48 words with every secondary word as
# its own singleton.

# %%
print(len(wheel_partition(wheel)), "words in the petal partition")
print(len(set(wheel_partition_all(lex).labels.values())), "labels over all 48 words")

# %% [markdown]
# Locality and globality average over ordered word pairs inside a petal and
# across facing petals.

# %%
within, across = petal_pair_sets(wheel, 0)
name = lex.word
print("inside joy:", [(name(a).english, name(b).english) for a, b in within])
print("joy -> sadness:", len(across), "pairs")
