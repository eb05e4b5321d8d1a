# coding: utf-8

# # Profiling corpora and placing them in dialogue-type quadrants
#
# Real corpora are large, so here three synthetic ones stand in for them.
# Each is generated with its own question/information/repetition rates.

# In[1]:

import json

from convshape import GeneratorSpec, classify, generate, profile, shapes
from convshape.profile import render_text, scatter_points, scatter_spec, dumps_spec

base = GeneratorSpec(n_dialogues=300)
corpora = {
    "asks-a-lot": base.scaled(question=3.0, dataset="asks-a-lot"),
    "plain": base,
    "chatty": base.scaled(information=2.0, repetition=0.5, dataset="chatty"),
}
vectors = {name: shapes(generate(spec, seed=i)) for i, (name, spec) in enumerate(corpora.items())}


# A profile is the mean and population standard deviation of every summary
# field across a corpus.

# In[2]:

profiles = [profile(vectors[name], name) for name in corpora]
print(render_text(profiles))


# The sign of the mean delta_q says who drives the conversation and delta_i
# says who brings the topics.  Values within the balance band count as
# balanced.

# In[3]:

for p in profiles:
    label = classify(p, balance_band=0.1)
    print(f"{p.dataset:<12} {label.driver.value:<16} {label.topic.value}")


# The same profiles make a Vega-Lite scatter with the axes at zero, ready for
# any Vega-Lite renderer.

# In[4]:

spec = scatter_spec(scatter_points(profiles, "delta_i", "delta_q"), "delta_i", "delta_q")
print(dumps_spec(spec)[:400], "...")
print(json.dumps(spec["data"]["values"], indent=1))
