# coding: utf-8

# # Reading a corpus with its own field names
#
# Source corpora rarely use the canonical layout.  A mapping names the fields
# and tells ingestion which speaker labels are the assistant and the seeker.

# In[1]:

import json

from convshape import MappingConfig, emit_canonical, ingest, shape
from convshape.metrics import SUMMARY_FIELDS

raw = [
    {"conv": "wow-1", "speaker": "0_Wizard", "utterance": "Jazz started in New Orleans."},
    {"conv": "wow-1", "speaker": "1_Apprentice", "utterance": "Who played jazz in New Orleans?"},
    {"conv": "wow-1", "speaker": "0_Wizard", "utterance": "Louis Armstrong played it there."},
    {"conv": "wow-1", "speaker": "1_Apprentice", "utterance": "I love Armstrong!"},
]
mapping = MappingConfig(
    role_field="speaker",
    role_aliases={"0_Wizard": "assistant", "1_Apprentice": "seeker"},
    text_field="utterance",
    id_field="conv",
    dataset="wow",
)
(dialogue,) = ingest([json.dumps(r) for r in raw], mapping)
print("\n".join(emit_canonical([dialogue])))


# There are no tags here, so the rule tagger decides which utterances are
# questions.

# In[2]:

v = shape(dialogue)
print({k: round(v.get(k), 3) for k in SUMMARY_FIELDS})


# A label that the mapping does not know stops ingestion with the line number.

# In[3]:

try:
    ingest([json.dumps({"conv": "x", "speaker": "narrator", "utterance": "hm"})], mapping)
except ValueError as exc:
    print("rejected:", exc)
