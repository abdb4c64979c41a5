#!/usr/bin/env python3
"""Regenerate the CSV fixtures in this directory (deterministic)."""
import math
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))


def write(name, text):
    with open(os.path.join(HERE, name), "w") as f:
        f.write(text)


def landmarks():
    rng = random.Random(20230817)
    k = 50
    rows = []
    header = "id,diag,age," + ",".join(f"x{j+1},y{j+1}" for j in range(k))
    for i in range(50):
        diag = rng.randint(0, 1)
        age = round(rng.uniform(7.0, 21.0), 2)
        # wavy closed contour; the group flag changes the harmonic mix and the
        # age stretches one axis so there is real signal to regress on
        phase = rng.uniform(0.0, 2 * math.pi)
        coords = []
        for j in range(k):
            a = 2 * math.pi * j / k
            r = 1.0 + 0.08 * math.sin(3 * a + phase)
            if diag:
                r += 0.12 * math.cos(2 * a)
            x = r * math.cos(a) * (1.0 + 0.012 * age)
            y = r * math.sin(a)
            x += rng.gauss(0.0, 0.01)
            y += rng.gauss(0.0, 0.01)
            coords.append(f"{x:.6f},{y:.6f}")
        rows.append(f"cc{i+1:03d},{diag},{age}," + ",".join(coords))
    write("landmarks_cc.csv", header + "\n" + "\n".join(rows) + "\n")


def landmarks_malformed():
    # line numbers matter: tests assert on them
    body = [
        "id,diag,age,x1,y1,x2,y2,x3,y3",      # line 1
        "ok1,0,10,0,0,1,0,1,1",               # line 2
        "bad_diag,3,10,0,0,1,0,1,1",          # line 3: diag out of range
        "bad_age,1,old,0,0,1,0,1,1",          # line 4: non-numeric age
        "bad_fields,0,10,0,0,1,0",            # line 5: wrong field count
        "bad_coord,0,10,0,0,one,0,1,1",       # line 6: non-numeric landmark
        "bad_shape,0,10,2,2,2,2,2,2",         # line 7: degenerate landmarks
        "ok2,1,15.5,0,1,1,0,2,2",             # line 8
    ]
    write("landmarks_malformed.csv", "\n".join(body) + "\n")


def prices():
    rng = random.Random(20230818)
    assets = ["ALP", "BRV", "CMA", "DLT", "EPS"]
    levels = [42.0, 87.5, 15.8, 230.0, 61.2]
    day = 18995  # 2022-01-03, a Monday
    rows = []
    week = 0
    total_weeks = 115
    # roughly one week in six loses a day to a holiday
    short_weeks = set(rng.sample(range(total_weeks), 18))
    while week < total_weeks:
        days_this_week = 4 if week in short_weeks else 5
        skip = rng.randrange(5 - days_this_week + 1) if days_this_week < 5 else 5
        for d in range(5):
            if days_this_week == 4 and d == skip:
                continue
            z = day + 7 * week + d
            y, m, dd = civil(z)
            closes = []
            for a in range(5):
                drift = 0.0002 * (1 + a)
                levels[a] *= math.exp(drift + 0.012 * rng.gauss(0.0, 1.0))
                closes.append(f"{levels[a]:.4f}")
            rows.append(f"{y:04d}-{m:02d}-{dd:02d}," + ",".join(closes))
        week += 1
    write("prices.csv", "date," + ",".join(assets) + "\n" + "\n".join(rows) + "\n")


def prices_malformed():
    body = [
        "date,ALP,BRV",           # line 1
        "2022-01-03,10.0,20.0",   # line 2
        "2022-01-04,10.1,19.9",   # line 3
        "2022-01-04,10.2,20.1",   # line 4: duplicate date
    ]
    write("prices_malformed.csv", "\n".join(body) + "\n")


def civil(z):
    # inverse of the days-since-epoch encoding (proleptic Gregorian)
    z += 719468
    era = (z if z >= 0 else z - 146096) // 146097
    doe = z - era * 146097
    yoe = (doe - doe // 1460 + doe // 36524 - doe // 146096) // 365
    y = yoe + era * 400
    doy = doe - (365 * yoe + yoe // 4 - yoe // 100)
    mp = (5 * doy + 2) // 153
    d = doy - (153 * mp + 2) // 5 + 1
    m = mp + 3 if mp < 10 else mp - 9
    return y + (1 if m <= 2 else 0), m, d


if __name__ == "__main__":
    landmarks()
    landmarks_malformed()
    prices()
    prices_malformed()
    print("fixtures written to", HERE)
