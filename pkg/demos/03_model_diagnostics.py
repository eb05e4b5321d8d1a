# coding: utf-8

# # Diagnosing model conversations against a reference
#
# The reference corpus stands for human-human conversation.  Each model corpus
# is scored by per-metric cross-entropy against the reference histograms, and
# gets a label from the ratio of its mean metrics to the reference means.

# In[1]:

from convshape import GeneratorSpec, ReferenceDistribution, diagnose, generate, preset, rank, shapes

base = GeneratorSpec(n_dialogues=500)
reference = ReferenceDistribution.build(shapes(generate(preset("reference", base), seed=0)))
print("reference self-entropy:", round(reference.self_entropy(), 4))


# Four stand-in models.  One shares the reference generator; the other three
# ask too much, talk too much or mostly echo their partner.

# In[2]:

models = {
    "matched": preset("reference", base),
    "interviewer": preset("interviewer", base),
    "talker": preset("talker", base),
    "parrot": preset("parrot", base),
}
reports = [
    diagnose(shapes(generate(spec, seed=10 + i)), reference, model=name)
    for i, (name, spec) in enumerate(models.items())
]


# In[3]:

for pos, r in enumerate(rank(reports), start=1):
    ratios = " ".join(f"{k}={v:.2f}" for k, v in r.ratios.items())
    print(f"{pos}. {r.model:<12} H={r.total:.4f} {r.label:<12} {ratios}")

# The matched model has the lowest total cross-entropy.  Its ratios sit near 1,
# so it is labelled Typical.
