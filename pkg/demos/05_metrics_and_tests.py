# %% [markdown]
# # Locality, globality, NMI and the two-dataset tests
#
# Two synthetic crowds rate the same pairs under different instructions:
# a "similarity" crowd with strong petals and an "association" crowd whose
# petals are weaker and whose opposite petals are rated closer.

# %%
from emonet.ingest import aggregate, run_filters
from emonet.metrics import across_pair_scores, locality_report, within_pair_scores
from emonet.stats import chi_square_homogeneity, paired_t_test, pearson_r, score_histogram
from emonet.synth import PlantedModel, generate

sim_model = PlantedModel(base_within=6.0, base_opposite=1.0, pair_sd=1.2, seed=1)
assoc_model = PlantedModel(base_within=4.5, base_opposite=2.0, pair_sd=1.2, seed=2)
sim, _ = run_filters(generate(sim_model, 480, "similarity"))
assoc, _ = run_filters(generate(assoc_model, 480, "association"))
lex = sim_model.lexicon
net_s, net_a = aggregate(sim, lex), aggregate(assoc, lex)

for name, net in (("similarity", net_s), ("association", net_a)):
    rep = locality_report(net, lex.wheel)
    print(f"{name:12s} locality {rep.locality:.3f}  globality {rep.globality:.3f}")

# %% [markdown]
# Score distributions are compared with a chi-square homogeneity test; the
# pair vectors behind locality (48 pairs) and globality (72 pairs) with
# paired t tests.

# %%
chi = chi_square_homogeneity(score_histogram(sim), score_histogram(assoc))
loc = paired_t_test(within_pair_scores(net_s, lex.wheel), within_pair_scores(net_a, lex.wheel))
glob = paired_t_test(across_pair_scores(net_s, lex.wheel), across_pair_scores(net_a, lex.wheel))
for label, res in (("chi-square", chi), ("locality t", loc), ("globality t", glob)):
    print(f"{label:12s} stat={res.statistic:9.3f} df={res.df:3d} p={res.p_value:.3g} underflow={res.underflow}")

# %% [markdown]
# p-values far below double precision are still reported in log space.

# %%
from emonet.stats import log_gamma_q

print("log p for chi2=1091.37 on 7 df:", log_gamma_q(3.5, 1091.37 / 2))

# %%
print("double-pass style r:", round(pearson_r([1, 5, 3, 7, 2], [2, 5, 4, 6, 1]), 4))
