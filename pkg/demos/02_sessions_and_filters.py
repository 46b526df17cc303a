# %% [markdown]
# # Rating sessions and quality filters
#
# Each participant rates one block of ordered word pairs on a 0..7 scale.
# Two catch questions ask for a given number, and 20 earlier questions are
# asked again at the end.  Cleaning drops incomplete sessions, sessions that
# miss a catch, and sessions whose two passes correlate below 0.4.

# %%
import io

from emonet.ingest import aggregate, parse_sessions, run_filters, sessions_to_csv
from emonet.synth import PlantedModel, generate

model = PlantedModel(pair_sd=1.2, noise_sd=1.0, careless_rate=0.1, seed=7)
sessions = generate(model, participants=480)
print(len(sessions), "sessions,", len(sessions[0].records), "records in the first")

# %% [markdown]
# Sessions travel as CSV.  Parsing gives back the same objects.

# %%
text = sessions_to_csv(sessions, model.lexicon)
print(text.splitlines()[0])
print(text.splitlines()[1])
assert parse_sessions(io.StringIO(text), model.lexicon) == sessions

# %%
kept, report = run_filters(sessions)
print(report.to_json())
assert report.reconciles()

# %% [markdown]
# Careless participants answer catches at random half the time, so most of
# them fail at least one of the two.  Removal rate for a fully careless crowd:

# %%
from emonet.ingest import filter_catch

careless = generate(PlantedModel(careless_rate=1.0, seed=1), 2000)
_, removed = filter_catch(careless)
print(f"removed {len(removed) / 2000:.3f}, closed form {1 - (0.5 + 0.5 / 8) ** 2:.3f}")

# %% [markdown]
# The retained sessions are averaged per ordered pair into a 48 x 48 network.

# %%
net = aggregate(kept, model.lexicon)
print(net.weights.shape, f"mean weight {net.weights.sum() / (48 * 47):.2f}")
