#!/usr/bin/env python3
# Copyright 2026 The Anchorpred Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates the 50-article fixture corpus and its expected build outcome.

Every expectation is computed from the generation plan (which links were
planted, into which sections, with which text), not by parsing the corpus.

Outputs (next to this script):
  corpus.jsonl            the corpus
  expected_funnel.json    per-stage counts
  expected_examples.json  surviving examples in build order
"""

import hashlib
import json
import os
import random
import re
import unicodedata

HERE = os.path.dirname(os.path.abspath(__file__))
RNG = random.Random(20260516)

SYLLABLES = ["ka", "lo", "mi", "ra", "te", "su", "vo", "ne", "pi", "da", "gor",
             "lin", "bet", "ush", "fra", "mon", "zel", "tir", "qua", "wen"]


def make_word(rng):
    return "".join(rng.choice(SYLLABLES) for _ in range(rng.choice([2, 2, 3])))


_seen = set()


def fresh_words(n):
    out = []
    while len(out) < n:
        w = make_word(RNG)
        if w not in _seen:
            _seen.add(w)
            out.append(w)
    return out


FILLER = fresh_words(150)


def sentence_words(topic, n, topic_share):
    words = []
    for _ in range(n):
        if topic and RNG.random() < topic_share:
            words.append(RNG.choice(topic))
        else:
            words.append(RNG.choice(FILLER))
    return words


def prose(topic, n, topic_share=0.4):
    words = sentence_words(topic, n, topic_share)
    words[0] = words[0].capitalize()
    # a comma now and then
    for i in range(6, len(words) - 1, 11):
        words[i] = words[i] + ","
    return " ".join(words) + "."


# ---------------------------------------------------------------------------
# Article model: a list of blocks. A paragraph block is a list of lines; each
# line is a list of segments, either plain strings or link dicts.

class Builder:
    def __init__(self, aid, title):
        self.id = aid
        self.title = title
        self.blocks = []  # ("para", [lines]) | ("head", level, heading_segments)

    def head(self, level, heading):
        segs = heading if isinstance(heading, list) else [heading]
        self.blocks.append(("head", level, segs))

    def para(self, *lines):
        self.blocks.append(("para", [list(l) if isinstance(l, list) else [l] for l in lines]))


def link(target, text, fragment=None, raw_target=None):
    return {"target": target, "text": text, "fragment": fragment,
            "raw_target": raw_target if raw_target is not None else target}


def render(builder):
    """Returns (markup body, plain text, links, sections, paragraphs)."""
    body_blocks = []
    text = ""
    links = []
    sections = []  # dicts: heading, level, parent, begin, end
    paragraphs = []  # dicts: begin, end, section
    stack = []

    def seg_markup(seg):
        if isinstance(seg, str):
            return seg
        inner = seg["raw_target"]
        if seg["fragment"] is not None:
            inner += "#" + seg["fragment"]
        return "[[" + inner + "|" + seg["text"] + "]]"

    def emit(segs, base):
        nonlocal text
        out = ""
        for seg in segs:
            if isinstance(seg, str):
                out += seg
            else:
                b = base + len(out.encode("utf-8"))
                out += seg["text"]
                links.append({"target": seg["target"], "text": seg["text"],
                              "fragment": seg["fragment"], "begin": b,
                              "end": b + len(seg["text"].encode("utf-8"))})
        return out

    for block in builder.blocks:
        if text:
            text += "\n\n"
        base = len(text.encode("utf-8"))
        if block[0] == "head":
            _, level, segs = block
            end_before = base - 2 if base else 0
            while stack and sections[stack[-1]]["level"] >= level:
                sections[stack[-1]]["end"] = end_before
                stack.pop()
            heading = emit(segs, base)
            text += heading
            sections.append({"heading": heading, "level": level,
                             "parent": stack[-1] if stack else None,
                             "begin": base, "end": len(text.encode("utf-8"))})
            stack.append(len(sections) - 1)
            eq = "=" * (level + 1)
            body_blocks.append(eq + " " + "".join(seg_markup(s) for s in segs) + " " + eq)
        else:
            _, lines = block
            joined = ""
            for i, line in enumerate(lines):
                if i:
                    joined += " "
                joined += emit(line, base + len(joined.encode("utf-8")))
            text += joined
            paragraphs.append({"begin": base, "end": len(text.encode("utf-8")),
                               "section": stack[-1] if stack else None})
            body_blocks.append("\n".join("".join(seg_markup(s) for s in line) for line in lines))
    for idx in stack:
        sections[idx]["end"] = len(text.encode("utf-8"))
    return "\n\n".join(body_blocks), text, links, sections, paragraphs


# ---------------------------------------------------------------------------
# Matching rules

DASHES = "-‐‑‒–—―−﹘﹣－"
STOPLIST = {"references", "see also", "external links", "notes",
            "further reading", "bibliography", "sources"}


def normalize(s):
    s = unicodedata.normalize("NFC", s).lower()
    s = "".join("-" if c in DASHES else c for c in s)
    return " ".join(s.split())


def tokens(s):
    return re.findall(r"[^\W_]+", s)


# ---------------------------------------------------------------------------
# Valid targets: (id, title, lead paragraphs, [(level, heading, paragraphs)])

TARGETS = [
    ("Elevator", "Elevator", 2, [
        (1, "History", 2), (2, "Hydraulic lifts", 2), (1, "Design", 3),
        (1, "Safety", 2), (1, "Operation", 2), (2, "Control systems", 1),
        (1, "Culture", 1), (1, "See also", 1), (1, "References", 2),
        (2, "Citations", 1)]),
    ("Lux Radio Theatre", "Lux Radio Theatre", 1, [
        (1, "Background", 1), (1, "Format", 2), (1, "Productions", 3),
        (2, "Film adaptations", 2), (1, "Hosts", 2), (1, "Legacy", 2),
        (1, "Notes", 1), (1, "External links", 1)]),
    ("Biblical manuscript", "Biblical manuscript", 2, [
        (1, "Cataloging", 2), (2, "Gregory–Aland", 2), (2, "Von Soden", 1),
        (1, "Materials", 2), (1, "Dating", 2), (1, "Collections", 2),
        (1, "Further reading", 1), (1, "References", 1)]),
    ("Handedness", "Handedness", 1, [
        (1, "Prevalence", 2), (1, "Causes", 2), (2, "Genetics", 2),
        (1, "Negative connotations and discrimination", 2), (1, "Sports", 2),
        (1, "Bibliography", 1)]),
    ("Tokyo Motor Show", "Tokyo Motor Show", 2, [
        (1, "History", 1), (2, "1977", 2), (2, "1989", 2), (1, "Exhibitors", 2),
        (1, "Venue", 2), (1, "Attendance", 1), (1, "Sources", 1)]),
    ("2012–13 UEFA Europa League", "2012–13 UEFA Europa League", 1, [
        (1, "Qualifying rounds", 2), (1, "Group stage", 3), (1, "Knockout phase", 1),
        (2, "Round of 32", 1), (2, "Quarter-final", 2), (2, "Final", 2),
        (1, "Statistics", 2), (1, "References", 1)]),
]

# Rejected-by-design targets: (id, title, lead, sections, intended reason)
REJECTS = [
    ("List of lighthouses", "List of lighthouses", 2, [
        (1, "Europe", 2), (1, "Asia", 2), (1, "Africa", 2), (1, "Americas", 2),
        (1, "Oceania", 2), (1, "Antarctica", 1)], "minimal_prose"),
    ("Mercury (disambiguation)", "Mercury (disambiguation)", 1, [
        (1, "Science", 1), (1, "Mythology", 1)], "minimal_prose"),
    ("Short topic", "Short topic", 1, [
        (1, "Alpha", 1), (1, "Beta", 1), (1, "Gamma", 1), (1, "Delta", 1),
        (1, "Epsilon", 1), (1, "Zeta", 1), (1, "See also", 1)], "too_short"),
    ("Flat topic", "Flat topic", 2, [
        (1, "Overview", 3), (1, "Details", 3), (1, "Variants", 3),
        (1, "Reception", 2), (1, "References", 2)], "too_few_sections"),
    ("Niche topic", "Niche topic", 2, [
        (1, "Origins", 2), (1, "Spread", 2), (1, "Usage", 2), (1, "Forms", 2),
        (1, "Revival", 2), (1, "Criticism", 2)], "too_few_inlinks"),
]

N_SOURCES = 38
SOURCE_IDS = ["Source %02d" % i for i in range(1, N_SOURCES + 1)]
DENSE_ID = "Dense hub"

PARA_TOKENS = {"Short topic": 40}


def build_topic_article(aid, title, lead, sections, topic_words):
    b = Builder(aid, title)
    n_tok = PARA_TOKENS.get(aid, 46)
    for i in range(lead):
        b.para(prose(topic_words["__lead__"], n_tok))
    for level, heading, n in sections:
        b.head(level, heading)
        for k in range(n):
            text = prose(topic_words[heading], n_tok)
            if k == 1 and n_tok > 20:
                words = text.split(" ")
                half = len(words) // 2
                b.para(" ".join(words[:half]), " ".join(words[half:]))
            else:
                b.para(text)
    return b


topic_vocab = {}
for aid, _, _, sections, *_ in TARGETS + REJECTS:
    vocab = {"__lead__": fresh_words(6)}
    for _, heading, _ in sections:
        vocab[heading] = fresh_words(6)
    topic_vocab[aid] = vocab

builders = {}
for aid, title, lead, sections in TARGETS:
    builders[aid] = build_topic_article(aid, title, lead, sections, topic_vocab[aid])
for aid, title, lead, sections, _ in REJECTS:
    builders[aid] = build_topic_article(aid, title, lead, sections, topic_vocab[aid])

# ---------------------------------------------------------------------------
# Link plan for sources. Each (source, valid target) pair gets one link of a
# weighted-random kind.

KINDS = [("plain", 30), ("valid", 36), ("dup", 14), ("trivial", 8),
         ("badfrag", 4), ("stoplisted", 4), ("underscore", 4)]
KIND_NAMES = [k for k, w in KINDS for _ in range(w)]

target_sections = {aid: [(lvl, h, n) for lvl, h, n in secs] for aid, _, _, secs in TARGETS}


def content_sections(aid):
    """Headings outside stoplisted subtrees."""
    out = []
    trivial_stack = []
    for level, heading, n in target_sections[aid]:
        while trivial_stack and trivial_stack[-1][0] >= level:
            trivial_stack.pop()
        parent_trivial = trivial_stack[-1][1] if trivial_stack else False
        t = parent_trivial or normalize(heading) in STOPLIST
        trivial_stack.append((level, t))
        if not t:
            out.append(heading)
    return out


def stoplisted_sections(aid):
    return [h for _, h, _ in target_sections[aid] if normalize(h) in STOPLIST]


DUP_POOL = {}
for aid, *_ in TARGETS:
    secs = content_sections(aid)
    short = aid.split(" ")[0].lower()
    DUP_POOL[aid] = [(short + " " + topic_vocab[aid][secs[1]][0] + " scheme", secs[1]),
                     (topic_vocab[aid][secs[3]][1] + " " + short + " notes", secs[3])]
DUP_POOL["Biblical manuscript"][0] = ("Gregory-Aland numbering", "Gregory–Aland")


def trivial_text(heading, variant):
    if variant == 0:
        return heading.lower()
    if variant == 1:
        return heading.replace("–", "-").upper() if "–" in heading else heading.upper()
    return "  ".join(heading.split(" "))  # doubled spaces collapse on matching


source_links = {sid: [] for sid in SOURCE_IDS}
for si, sid in enumerate(SOURCE_IDS):
    for aid, *_ in TARGETS:
        kind = RNG.choice(KIND_NAMES)
        secs = content_sections(aid)
        if kind == "plain":
            l = link(aid, "the " + aid.split(" ")[-1].lower() + " article")
            sec = None
        elif kind == "valid":
            sec = RNG.choice(secs)
            l = link(aid, RNG.choice(topic_vocab[aid][sec]) + " " +
                     make_word(RNG) + " " + sid.split(" ")[1], sec)
        elif kind == "dup":
            text, sec = RNG.choice(DUP_POOL[aid])
            if RNG.random() < 0.3:
                sec = RNG.choice(secs)
            l = link(aid, text, sec)
        elif kind == "trivial":
            sec = RNG.choice(secs)
            l = link(aid, trivial_text(sec, RNG.randrange(3)), sec)
        elif kind == "badfrag":
            sec = "Nonexistent section"
            l = link(aid, "lost " + make_word(RNG) + " reference", sec)
        elif kind == "stoplisted":
            sec = RNG.choice(stoplisted_sections(aid))
            l = link(aid, "sources on " + make_word(RNG), sec)
        else:  # underscore / case-folded fragment
            sec = RNG.choice([s for s in secs if " " in s] or secs)
            frag = sec.replace(" ", "_").lower()
            l = link(aid, make_word(RNG) + " " + RNG.choice(topic_vocab[aid][sec]) + " detail", frag)
            l["section"] = sec
        l.setdefault("section", sec)
        l["kind"] = kind
        source_links[sid].append(l)
    # Link text longer than the heading it points to: not trivial.
    if si == 4:
        source_links[sid].append(dict(link("2012–13 UEFA Europa League",
                                           "Europa League quarter-final second leg",
                                           "Quarter-final"), kind="valid", section="Quarter-final"))
    if si % 5 == 0:
        rej = REJECTS[(si // 5) % len(REJECTS)][0]
        sec = [h for _, h, _ in REJECTS[(si // 5) % len(REJECTS)][3]][0]
        source_links[sid].append(dict(link(rej, "about " + make_word(RNG), sec),
                                      kind="rejected_target", section=None))
    if si % 9 == 0:
        source_links[sid].append(dict(link("Atlantis", "lost city " + make_word(RNG), "Legend"),
                                      kind="missing_target", section=None))
    if si % 11 == 0:
        source_links[sid].append(dict(link(sid, "see background", "Background", raw_target=""),
                                      kind="self_link", section=None))
    if si < 10:
        source_links[sid].append(dict(link("Niche topic", "niche " + make_word(RNG)),
                                      kind="plain", section=None))

source_vocab = {sid: fresh_words(5) for sid in SOURCE_IDS}


def context_words(l):
    """Words placed around a link; anchored links borrow target-section words."""
    sec = l.get("section")
    if sec and l["target"] in topic_vocab and sec in topic_vocab[l["target"]]:
        return topic_vocab[l["target"]][sec]
    return None


for si, sid in enumerate(SOURCE_IDS):
    b = Builder(sid, sid + " " + source_vocab[sid][0].capitalize())
    links_here = source_links[sid]
    RNG.shuffle(links_here)
    # self links must live after the Background heading, so place lead links first
    lead_links = [l for l in links_here if l["kind"] != "self_link"][:2]
    rest = [l for l in links_here if not any(l is x for x in lead_links)]

    def linked_para(ls):
        segs = []
        for l in ls:
            before = sentence_words(context_words(l), 9, 0.5)
            after = sentence_words(context_words(l), 7, 0.5)
            segs.append(" ".join(before).capitalize() + " ")
            segs.append(l)
            segs.append(" " + " ".join(after) + ". ")
        segs[-1] = segs[-1].rstrip()
        return segs

    b.para(linked_para(lead_links) if lead_links else prose(source_vocab[sid], 30))
    b.head(1, "Background")
    b.para(prose(source_vocab[sid], 28))
    half = (len(rest) + 1) // 2
    if rest[:half]:
        b.para(linked_para(rest[:half]))
    b.head(1, "Reception")
    if rest[half:]:
        b.para(linked_para(rest[half:]))
    b.para(prose(source_vocab[sid], 24))
    builders[sid] = b

# Dense hub: a link-dominated page with plain links to every valid target.
dense = Builder(DENSE_ID, "Dense hub")
dense.para([link(aid, aid) if i == 0 else link(aid, aid) for i, (aid, *_) in enumerate(TARGETS[:1])] +
           sum(([", ", link(aid, aid)] for aid, *_ in TARGETS[1:]), []))
dense.head(1, "More")
dense.para(sum(([link(s, s), " "] for s in SOURCE_IDS[:12]), [])[:-1])
builders[DENSE_ID] = dense

ORDER = ([aid for aid, *_ in TARGETS] + [r[0] for r in REJECTS] + [DENSE_ID] + SOURCE_IDS)
assert len(ORDER) == 50, len(ORDER)

# ---------------------------------------------------------------------------
# Render and compute expectations.

rendered = {aid: render(builders[aid]) for aid in ORDER}

inlinks = {aid: 0 for aid in ORDER}
for aid in ORDER:
    targets = {l["target"] for l in rendered[aid][2] if l["target"] in inlinks and l["target"] != aid}
    for t in targets:
        inlinks[t] += 1


def decide(aid):
    b = builders[aid]
    _, text, links, sections, _ = rendered[aid]
    title = b.title
    if title.startswith("List of") or title.endswith("(disambiguation)"):
        return "minimal_prose"
    link_chars = sum(l["end"] - l["begin"] for l in links)
    if link_chars > 0.5 * len(text.encode("utf-8")):
        return "link_dense"
    if len(tokens(text)) < 500:
        return "too_short"
    trivial = []
    for s in sections:
        t = normalize(s["heading"]) in STOPLIST or (s["parent"] is not None and trivial[s["parent"]])
        trivial.append(t)
    if sum(1 for t in trivial if not t) < 5:
        return "too_few_sections"
    if inlinks[aid] < 25:
        return "too_few_inlinks"
    if inlinks[aid] > 5000:
        return "too_many_inlinks"
    return None


decisions = {aid: decide(aid) for aid in ORDER}
for aid, *_ in TARGETS:
    assert decisions[aid] is None, (aid, decisions[aid], inlinks[aid])
for r in REJECTS:
    assert decisions[r[0]] == r[4], (r[0], decisions[r[0]])
assert decisions[DENSE_ID] == "link_dense"


def find_section(aid, fragment):
    key = normalize(fragment.replace("_", " "))
    for i, s in enumerate(rendered[aid][3]):
        if normalize(s["heading"]) == key:
            return i
    return None


def candidates(aid):
    _, text, _, sections, paragraphs = rendered[aid]
    trivial = []
    for s in sections:
        trivial.append(normalize(s["heading"]) in STOPLIST or
                       (s["parent"] is not None and trivial[s["parent"]]))
    out = []
    for p in paragraphs:
        if p["section"] is None or not trivial[p["section"]]:
            out.append(p)
    return out


funnel = {"articles": len(ORDER), "accepted_targets": 0, "rejected_targets": {},
          "links_total": 0, "links_with_fragment": 0, "dropped_missing_target": 0,
          "dropped_self_link": 0, "dropped_rejected_target": 0,
          "dropped_unknown_fragment": 0}
for aid in ORDER:
    if decisions[aid] is None:
        funnel["accepted_targets"] += 1
    else:
        funnel["rejected_targets"][decisions[aid]] = funnel["rejected_targets"].get(decisions[aid], 0) + 1
funnel["rejected_targets"] = dict(sorted(funnel["rejected_targets"].items()))

step1 = []
for aid in ORDER:
    for l in rendered[aid][2]:
        funnel["links_total"] += 1
        if l["fragment"] is None:
            continue
        funnel["links_with_fragment"] += 1
        if l["target"] not in rendered:
            funnel["dropped_missing_target"] += 1
            continue
        if l["target"] == aid:
            funnel["dropped_self_link"] += 1
            continue
        if decisions[l["target"]] is not None:
            funnel["dropped_rejected_target"] += 1
            continue
        if find_section(l["target"], l["fragment"]) is None:
            funnel["dropped_unknown_fragment"] += 1
            continue
        step1.append(dict(l, source=aid))
step1.sort(key=lambda l: (l["source"].encode("utf-8"), l["begin"], l["end"]))
funnel["step1_extracted"] = len(step1)

seen = set()
step2 = []
for l in step1:
    key = (normalize(l["text"]), l["target"])
    if key in seen:
        continue
    seen.add(key)
    step2.append(l)
funnel["step2_deduplicated"] = len(step2)
funnel["step2_removed"] = len(step1) - len(step2)

step3 = []
for l in step2:
    sec = rendered[l["target"]][3][find_section(l["target"], l["fragment"])]
    if normalize(l["text"]) == normalize(sec["heading"]):
        continue
    step3.append(l)
funnel["step3_nontrivial"] = len(step3)
funnel["step3_removed"] = len(step2) - len(step3)

examples = []
dropped_empty = 0
splits = {}
for l in step3:
    sections = rendered[l["target"]][3]
    linked = find_section(l["target"], l["fragment"])
    cands = candidates(l["target"])
    relevant = []
    for idx, p in enumerate(cands):
        s = p["section"]
        while s is not None and s != linked:
            s = sections[s]["parent"]
        if s is not None:
            relevant.append(idx)
    if not relevant:
        dropped_empty += 1
        continue
    key = "\x1f".join([l["source"], str(l["begin"]), str(l["end"]), l["target"]])
    eid = hashlib.sha256(key.encode("utf-8")).hexdigest()[:32]
    bucket = int.from_bytes(hashlib.sha256(eid.encode("utf-8")).digest()[:8], "big") % 10
    split = "train" if bucket < 8 else ("dev" if bucket == 8 else "test")
    splits[split] = splits.get(split, 0) + 1
    examples.append({"example_id": eid, "source_id": l["source"],
                     "link_span": [l["begin"], l["end"]], "link_text": l["text"],
                     "target_id": l["target"], "n_candidates": len(cands),
                     "relevant": relevant, "split": split})
funnel["dropped_empty_section"] = dropped_empty
funnel["examples"] = len(examples)
funnel["splits"] = dict(sorted(splits.items()))

with open(os.path.join(HERE, "corpus.jsonl"), "w", encoding="utf-8") as f:
    for aid in ORDER:
        body = rendered[aid][0]
        f.write(json.dumps({"id": aid, "title": builders[aid].title, "body": body},
                           ensure_ascii=False) + "\n")
with open(os.path.join(HERE, "expected_funnel.json"), "w", encoding="utf-8") as f:
    json.dump(funnel, f, indent=2, ensure_ascii=False)
    f.write("\n")
with open(os.path.join(HERE, "expected_examples.json"), "w", encoding="utf-8") as f:
    json.dump(examples, f, indent=1, ensure_ascii=False)
    f.write("\n")

print(json.dumps(funnel, indent=2, ensure_ascii=False))
