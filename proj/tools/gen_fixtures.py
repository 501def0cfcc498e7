#!/usr/bin/env python3
# Copyright (c) 2026 The wprompt Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# Regenerates the bundled fixtures under data/. Output is deterministic.
#   python3 tools/gen_fixtures.py [repo_root]

import base64
import json
import os
import sys

LANGUAGES = (
    "en zh de es ru ko fr ja pt tr pl ca nl ar sv it id hi fi vi he uk el ms "
    "cs ro da hu ta no th ur hr bg lt la mi ml cy sk te fa lv bn sr az sl kn "
    "et mk br eu is hy ne mn bs kk sq sw gl mr pa si km sn yo so af oc ka be "
    "tg sd gu am yi lo uz fo ht ps tk nn mt sa lb my bo tl mg as tt haw ln ha "
    "ba jw su"
).split()
assert len(LANGUAGES) == 99 and len(set(LANGUAGES)) == 99

WORDS = [
    # english, with and without the leading space
    "the", "a", "cat", "sat", "on", "mat", "hello", "world", "research",
    "spinach", "olive", "oil", "bowl", "is", "this", "photo", "of", "we",
    "do", "not", "need", "to", "meeting", "yes", "okay", "good", "morning",
    "today", "project", "deadline", "email", "paper", "data", "model",
    "weekend", "coffee", "lab", "report", "slides", "team", "and", "it",
    "you", "i", "have", "will", "send", "check", "later", "thanks",
    "video", "cooking", "pan", "knife", "onion", "garlic", "stir", "fry",
]
CJK = [
    "你好", "研究", "我们", "今天", "明天", "开会", "项目", "老师", "学生",
    "时间", "工作", "中文", "英文", "周末", "咖啡", "报告", "数据", "模型",
    "也", "不", "需", "要", "做", "研", "究", "你", "好", "我", "们", "今",
    "天", "的", "是", "在", "这", "个", "有", "了", "和", "吗", "一", "下",
    "发", "给", "看", "还", "没", "很", "忙", "去", "喝", "写", "完", "跟",
]
CYRILLIC = ["привет", "мир", "да", "нет", "кот", "сидит", "на", "ковре",
            "это", "фото", "я", "люблю", "кофе"]
ARABIC = ["مرحبا", "عالم", "سلام", "قطة"]


def build_vocab():
    tokens = [bytes([b]) for b in range(256)]
    seen = set(tokens)

    def add(text):
        b = text.encode("utf-8")
        if b not in seen:
            seen.add(b)
            tokens.append(b)

    for w in WORDS:
        add(w)
        add(" " + w)
    for w in CJK:
        add(w)
    for w in CYRILLIC:
        add(w)
        add(" " + w)
    for w in ARABIC:
        add(w)
        add(" " + w)
    add(", ")
    specials = [("eot", "<|endoftext|>"), ("sot", "<|startoftranscript|>")]
    specials += [("lang:" + c, "<|%s|>" % c) for c in LANGUAGES]
    specials += [("st", "<|translate|>"), ("asr", "<|transcribe|>"),
                 ("sop", "<|startofprev|>"),
                 ("no_timestamps", "<|notimestamps|>")]
    table = []
    for name, surface in specials:
        table.append((name, len(tokens)))
        tokens.append(surface.encode("utf-8"))
    lines = ["vocab_size %d" % len(tokens)]
    for i, t in enumerate(tokens):
        lines.append("token %d %s" % (i, base64.b64encode(t).decode("ascii")))
    for name, i in table:
        lines.append("special %s %d" % (name, i))
    return "\n".join(lines) + "\n"


# (id, reference, zh-only output, en-only output, lid logits zh/en,
#  concat output override). The concat prompt reproduces the reference
# unless an override is given.
UTTERANCES = [
    ("cs01", "我们今天开会 meeting", "我们今天开会", "we today meeting", (3.0, 0.0), None),
    ("cs02", "也不需要做 research", "也不需要做研究", "also no need research", (3.5, 0.0), None),
    ("cs03", "你好 hello 你好", "你好你好你好", "hello hello hello", (2.5, 0.0), None),
    ("cs04", "这个 project 的 deadline 是明天", "这个项目的是明天", "this project deadline tomorrow", (3.0, 0.0), None),
    ("cs05", "我在写 report", "我在写报告", "i write report", (2.8, 0.0), None),
    ("cs06", "给我发一下 email", "给我发一下", "send me email", (2.6, 0.0), None),
    ("cs07", "今天 coffee 很好", "今天咖啡很好", "today coffee good", (3.2, 0.0), None),
    ("cs08", "这个 model 还没 check", "这个模型还没看", "this model not check", (2.9, 0.0), None),
    ("cs09", "我们 weekend 去 lab", "我们周末去", "we weekend lab", (3.1, 0.0), "我们 weekend 去"),
    ("cs10", "slides 写完了吗", "写完了吗", "slides done", (2.4, 0.0), None),
    ("cs11", "the data 很好", "数据很好", "the data good", (0.0, 2.6), None),
    ("cs12", "okay 我看一下", "好我看一下", "okay i check", (0.0, 2.5), None),
    ("cs13", "thanks 老师", "谢老师", "thanks teacher", (0.0, 3.0), "thanks 老"),
    ("cs14", "send 给 team", "给", "send team", (0.0, 2.7), None),
    ("zh01", "我们明天开会", "我们明天开会", "we tomorrow meeting", (4.0, 0.0), None),
    ("zh02", "今天很忙", "今天很忙", "today busy", (4.0, 0.0), "今天很"),
    ("zh03", "老师和学生", "老师和学生", "teacher student", (4.0, 0.0), None),
    ("en01", "good morning team", "好", "good morning team", (0.0, 4.0), None),
    ("en02", "we will send the slides later", "我们", "we will send the slides later", (0.0, 4.0), "we will send slides later"),
    ("en03", "the cat sat on the mat", "猫", "the cat sat on the mat", (0.0, 4.0), None),
]


def build_mock():
    manifest = []
    script = {"utterances": {}}
    for uid, ref, zh_out, en_out, (lz, le), concat_out in UTTERANCES:
        audio = "mock://" + uid
        manifest.append({"id": uid, "audio": audio, "reference": ref,
                         "task": "cs_asr", "languages": ["zh", "en"]})
        script["utterances"][audio] = {
            "lid": {"zh": lz, "en": le},
            "responses": [
                {"languages": ["zh", "en"],
                 "candidates": [{"text": concat_out or ref, "score": 0.0}]},
                {"languages": ["zh"], "candidates": [{"text": zh_out, "score": 0.0}]},
                {"languages": ["en"], "candidates": [{"text": en_out, "score": 0.0}]},
            ],
        }
    return manifest, script


def write(path, text):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def main():
    root = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "..")
    data = os.path.join(root, "data")
    write(os.path.join(data, "test_vocab.manifest"), build_vocab())
    manifest, script = build_mock()
    write(os.path.join(data, "mock", "manifest.jsonl"),
          "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in manifest))
    write(os.path.join(data, "mock", "mock_script.json"),
          json.dumps(script, ensure_ascii=False, indent=1, sort_keys=True) + "\n")
    config = {
        "vocab": "../test_vocab.manifest",
        "backend": "mock:mock_script.json",
        "policy": {"kind": "concat", "languages": ["zh", "en"],
                   "lid_threshold": 0.9},
        "decode": {"max_new_tokens": 64, "strategy": "greedy"},
        "output_dir": "out",
        "cache_dir": "cache",
        "workers": 4,
    }
    write(os.path.join(data, "mock", "config.json"),
          json.dumps(config, indent=2) + "\n")


if __name__ == "__main__":
    main()
