# Copyright (c) 2026 ASES Authors
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
"""Writes the synthetic fixture corpora under tests/data.

  fixture_mwp.jsonl          100 English math word problems with CoT targets
  fixture_reports.jsonl      50 Chinese PET-style reports (findings + impression)
  fixture_pet.jsonl          100 abnormal region sections cut from those reports
  fixture_pet_normals.jsonl  50 normal region sections from the same reports
  keyword_map.txt            region -> keyword map used to cut the reports

Every PET clause names its organ, so keyword routing is unambiguous and the
sections equal what `ases split-report` produces from fixture_reports.jsonl.
"""

import argparse
import json
import pathlib
import random

NAMES = ["Tom", "Mia", "Ravi", "Lena", "Omar", "Sofia", "Ken", "Ada", "Luis", "Zoe"]
ITEMS = ["apples", "marbles", "stickers", "books", "pencils", "cookies", "coins", "cards"]

REGIONS = [
    ("lymph_node", ["淋巴结"]),
    ("liver", ["肝"]),
    ("lung", ["肺"]),
    ("pancreas", ["胰"]),
    ("kidney", ["肾"]),
    ("bone", ["骨", "椎"]),
]

ABNORMAL = {
    "lymph_node": (
        ["纵隔见多发肿大淋巴结，", "淋巴结最大短径约{s}cm，", "淋巴结FDG摄取增高（SUVmax约{v}）。"],
        ["纵隔多发淋巴结代谢增高，", "淋巴结转移可能。"],
    ),
    "liver": (
        ["肝右叶见一低密度灶，", "肝内病灶大小约{s}cm，", "肝内病灶放射性摄取增高（SUVmax约{v}）。"],
        ["肝右叶低密度灶伴代谢增高，", "肝脏恶性病变可能。"],
    ),
    "lung": (
        ["右肺上叶见一结节影，", "肺结节大小约{s}cm，", "肺结节FDG代谢增高（SUVmax约{v}）。"],
        ["右肺上叶高代谢结节，", "肺癌可能性大。"],
    ),
    "pancreas": (
        ["胰头区见一稍低密度肿块，", "胰头肿块大小约{s}cm，", "胰头肿块代谢增高（SUVmax约{v}）。"],
        ["胰头高代谢肿块，", "胰腺癌可能。"],
    ),
    "kidney": (
        ["左肾见一类圆形肿块，", "肾肿块大小约{s}cm，", "肾肿块代谢轻度增高（SUVmax约{v}）。"],
        ["左肾占位伴代谢增高，", "肾癌待排。"],
    ),
    "bone": (
        ["胸椎及骨盆见多发骨质破坏，", "骨病灶FDG摄取增高（SUVmax约{v}）。"],
        ["多发骨质破坏伴代谢增高，", "骨转移可能。"],
    ),
}

NORMAL = {
    "lymph_node": "双侧颈部未见肿大淋巴结，淋巴结未见异常代谢。",
    "liver": "肝脏形态大小正常，肝内未见异常密度影。",
    "lung": "双肺纹理清晰，肺内未见异常密度影。",
    "pancreas": "胰腺形态正常，胰腺未见异常代谢。",
    "kidney": "双肾形态大小正常，肾实质未见异常代谢。",
    "bone": "诸骨骨质未见明显异常，骨骼未见异常代谢。",
}


def mwp_sample(rng, k):
    name = rng.choice(NAMES)
    item = rng.choice(ITEMS)
    kind = k % 4
    if kind == 0:
        a, b = rng.randint(3, 40), rng.randint(2, 30)
        query = (f"{name} has {a} {item}. {name} buys {b} more {item}. "
                 f"How many {item} does {name} have now?")
        target = (f"{name} has {a} {item}. {name} buys {b} more {item}. "
                  f"So {name} has {a} + {b} = {a + b} {item}. The answer is {a + b}.")
    elif kind == 1:
        a, b = rng.randint(20, 90), rng.randint(2, 19)
        query = (f"There are {a} {item} in a box. {name} gives away {b} of them. "
                 f"How many {item} are left in the box?")
        target = (f"There are {a} {item} in the box. {name} gives away {b}. "
                  f"{a} - {b} = {a - b}, so {a - b} {item} are left. The answer is {a - b}.")
    elif kind == 2:
        a, b = rng.randint(2, 12), rng.randint(2, 12)
        price = rng.choice([1.5, 2.5, 0.5, 3.25])
        query = (f"{name} packs {a} bags with {b} {item} each and sells every bag for "
                 f"${price}. How much money does {name} make?")
        total = a * price
        total_s = f"{total:g}"
        target = (f"{name} packs {a} bags. Each bag sells for ${price}. "
                  f"{a} * {price} = {total_s}. The answer is {total_s}.")
    else:
        a = rng.randint(2, 9) * 100
        b = rng.randint(2, 5)
        query = (f"A school orders {a} {item} for each of its {b} classes. "
                 f"How many {item} does the school order in total?")
        total = a * b
        target = (f"Each class gets {a} {item}. There are {b} classes. "
                  f"{a} * {b} = {total:,}, so the school orders {total:,} {item}. "
                  f"The answer is {total:,}.")
    return {"id": f"mwp-{k:03d}", "query": query, "target": target, "task": "MWP"}


def pet_report(rng, k):
    names = [r for r, _ in REGIONS]
    chosen = rng.sample(names, 3)
    abnormal = chosen[:2]
    normal = chosen[2]
    findings = {}
    impressions = {}
    for region in abnormal:
        clauses, imp = ABNORMAL[region]
        s = f"{rng.uniform(0.8, 6.0):.1f}"
        v = f"{rng.uniform(2.5, 14.0):.1f}"
        findings[region] = "".join(c.format(s=s, v=v) for c in clauses)
        impressions[region] = "".join(imp)
    findings[normal] = NORMAL[normal]
    order = [r for r, _ in REGIONS]
    report_id = f"rpt-{k:03d}"
    text_order = chosen[:]
    rng.shuffle(text_order)
    report = {
        "id": report_id,
        "findings": "".join(findings[r] for r in text_order),
        "impression": "".join(impressions[r] for r in abnormal),
    }
    sections = []
    normals = []
    for region in order:
        if region in abnormal:
            sections.append({"id": f"{report_id}:{region}", "query": findings[region],
                             "target": impressions[region], "task": "PET",
                             "report_id": report_id})
        elif region == normal:
            normals.append({"report_id": report_id, "region": region,
                            "findings": findings[region], "impression": "No obvious anomaly"})
    return report, sections, normals


def dump(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(row, ensure_ascii=False, separators=(",", ":")) + "\n")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=str(pathlib.Path(__file__).parent.parent / "tests" / "data"))
    parser.add_argument("--seed", type=int, default=20261017)
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)

    dump(out / "fixture_mwp.jsonl", [mwp_sample(rng, k) for k in range(100)])

    reports, sections, normals = [], [], []
    for k in range(50):
        r, s, n = pet_report(rng, k)
        reports.append(r)
        sections.extend(s)
        normals.extend(n)
    dump(out / "fixture_reports.jsonl", reports)
    dump(out / "fixture_pet.jsonl", sections)
    dump(out / "fixture_pet_normals.jsonl", normals)

    with open(out / "keyword_map.txt", "w", encoding="utf-8") as f:
        f.write("# region = keywords (first matching region wins)\n")
        for region, kws in REGIONS:
            f.write(f"{region} = {', '.join(kws)}\n")


if __name__ == "__main__":
    main()
