# coding: utf-8

# # Shape of one dialogue
#
# A seven-turn movie recommendation exchange ships with the package.  We load
# it, attach the hand-assigned utterance tags and compute its shape vector.

# In[1]:

from importlib.resources import files

from convshape import TokenizerConfig, import_tags, read_corpus, shape, token_events
from convshape.lexical import load_term_list
from convshape.metrics import ROW_FIELDS

data = files("convshape") / "data" / "redial_example"
dialogue = read_corpus(data / "dialogue.jsonl")[0]
for u in dialogue.utterances:
    print(u.index, u.role.short, u.text)


# Tags come from a separate file keyed by dialogue id and turn.  Two of the
# assistant's turns are wh-questions.

# In[2]:

with open(data / "tags.jsonl", encoding="utf-8") as fh:
    dialogue = import_tags([dialogue], fh)[0]
print([u.tag.value for u in dialogue.utterances])


# The canonical tokenizer drops stopwords plus a short exclusion list, strips
# plurals and keeps anaphora.  Each event below is one surviving token.

# In[3]:

tok = TokenizerConfig(exclusions=load_term_list(data / "exclusions.txt"))
for e in token_events(dialogue, tok):
    if e.dialogue_freq > 1 or e.is_anaphor:
        print(f"{e.utterance_index} {e.occurrence_role.short} {e.token:<8} "
              f"introduced by {e.introducer.short} cross-role={e.is_repetition_across_roles}")


# In[4]:

v = shape(dialogue, tok)
for name in ROW_FIELDS:
    print(f"{name:<8} {v.get(name): .4f}")

# The assistant asks every question and does all the repeating, while topic
# words are coined evenly.  So delta_q and delta_r are 1 and delta_i is 0.
