# %% [markdown]
# # Layouts and exports
#
# Classical MDS places words by their dissimilarity and communities by the
# flow between them.  Exports are plain text: DOT, GraphML and SVG.

# %%
from pathlib import Path

from emonet.export import layout_svg, network_dot, network_graphml, omega_dot
from emonet.graph import dissimilarity, markov_model
from emonet.ingest import aggregate, run_filters
from emonet.mdmc import DecomposeConfig, decompose_best, omega
from emonet.mds import classical_mds, omega_layout
from emonet.synth import PlantedModel, generate

out = Path("demo_output")
out.mkdir(exist_ok=True)

model = PlantedModel(base_within=7, base_opposite=0, base_other=0.5, pair_sd=0.6, noise_sd=0.5, seed=3)
kept, _ = run_filters(generate(model, 480))
lex = model.lexicon
net = aggregate(kept, lex)
m = markov_model(net)

words = classical_mds(dissimilarity(net))
print("word layout eigenvalues", words.eigenvalues.round(2), "stress note", round(words.stress_note, 3))
colors = [lex.color(i) for i in range(48)]
(out / "words.svg").write_text(layout_svg(words, lex.labels, colors, title="words"))

# %%
dec = decompose_best(m, DecomposeConfig(), range(10))
cn = omega(dec, m)
print("community strengths x 10^4:\n", cn.scaled().round(1))
print("top words:", [[lex.labels[i] for i in top] for top in cn.top_nodes])
(out / "communities.svg").write_text(
    layout_svg(omega_layout(cn), [", ".join(lex.labels[i] for i in t) for t in cn.top_nodes], title="communities"))
(out / "communities.dot").write_text(omega_dot(cn, lex.labels))
(out / "network.dot").write_text(network_dot(net, colors))
(out / "network.graphml").write_text(network_graphml(net))
print(sorted(p.name for p in out.iterdir()))
