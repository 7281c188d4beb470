/** Live-service round trip: train a tiny checkpoint, start the HTTP service,
 * then drive the real studio flow: stroke -> resample -> sync -> preview ->
 * generate -> badges. Requires python3 with the motionweave package installed
 * (run from the repository: `npm run test:e2e`). */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { StudioClient } from "../src/api";
import { badgesFromReport, formatEpeBadge, overlayMarkersAtFrame } from "../src/playback";
import { resampleStroke } from "../src/stroke";
import { buildTrajectoryFile, validateTrajectoryFile } from "../src/tracks";
import { encodeTensor, videoAt, type Tensor } from "../src/wmt";
import type { Geometry, Stroke } from "../src/types";

const GEOM: Geometry = { f_t: 4, f_s: 4, channels: 3, video_frames: 9, height: 32, width: 32 };
const PORT = 8790 + Math.floor(Math.random() * 200);
const BASE = `http://127.0.0.1:${PORT}`;
const REPO_ROOT = join(__dirname, "..", "..");

let server: ChildProcess | null = null;
let client: StudioClient;

function trainConfig(dir: string): string {
  return `
[geometry]
f_t = 4
f_s = 4
channels = 3
video_frames = 9
height = 32
width = 32

[dataset]
count = 6
seed = 0
family = "piecewise"
blob_min = 1
blob_max = 1
grid_tracks_per_side = 4

[train]
total_steps = 30
batch_size = 4
warmup_steps = 5
seed = 0

[output]
dir = "${dir.replaceAll("\\", "/")}/run"
`;
}

/** First frame with a bright warm patch where the stroke will start. */
function makeFirstFrame(): ArrayBuffer {
  const data = new Float32Array(32 * 32 * 3);
  for (let r = 0; r < 32; r++)
    for (let c = 0; c < 32; c++) data[(r * 32 + c) * 3 + 2] = 0.05; // faint blue floor
  for (let r = 14; r < 18; r++) {
    for (let c = 2; c < 6; c++) {
      const i = (r * 32 + c) * 3;
      data[i] = 0.9; // red patch at rows 14..17, cols 2..5
      data[i + 1] = 0.45;
    }
  }
  return encodeTensor({ dims: [32, 32, 3], data });
}

async function waitForHealth(timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const r = await fetch(`${BASE}/health`);
      if (r.ok) return;
    } catch {
      /* not up yet */
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  const dir = mkdtempSync(join(tmpdir(), "mw-e2e-"));
  const cfg = join(dir, "train.toml");
  writeFileSync(cfg, trainConfig(dir));
  const trained = spawnSync("python3", ["-m", "motionweave.cli", "train", "--config", cfg], {
    cwd: REPO_ROOT,
    encoding: "utf8",
    timeout: 180_000,
  });
  expect(trained.status, trained.stderr).toBe(0);

  server = spawn(
    "python3",
    [
      "-m", "motionweave.cli", "serve",
      "--ckpt", join(dir, "run", "checkpoint"),
      "--port", String(PORT),
    ],
    { cwd: REPO_ROOT, stdio: "ignore" },
  );
  await waitForHealth(30_000);
  client = new StudioClient(BASE);
}, 240_000);

afterAll(() => {
  server?.kill();
});

describe("studio round trip against the live service", () => {
  // stroke start sits on the red patch center (x=col 3.5, y=row 15.5)
  const stroke: Stroke = {
    trackId: 0,
    points: [
      { x: 3.5, y: 15.5, t: 0, visible: true },
      { x: 27.5, y: 15.5, t: 640, visible: true },
    ],
  };

  it("resamples, syncs, and the preview shows the patch displaced along the path", async () => {
    const sid = await client.createSession(GEOM);
    expect(sid).toBeTruthy();
    await client.uploadFrame(sid, makeFirstFrame());

    // 2-point stroke -> 1+T collinear, equally spaced points
    const resampled = resampleStroke(stroke.points, GEOM.video_frames);
    expect(resampled).toHaveLength(9);
    for (let i = 0; i < 9; i++) {
      expect(resampled[i].y).toBeCloseTo(15.5, 9);
      expect(resampled[i].x).toBeCloseTo(3.5 + 3 * i, 9);
    }

    const file = buildTrajectoryFile([stroke], GEOM);
    expect(validateTrajectoryFile(file)).toEqual([]);
    const validation = await client.putTracks(sid, file);
    expect(validation.accepted).toBe(true);
    expect(validation.violations).toEqual([]);

    const preview: Tensor = await client.preview(sid, 0);
    expect(preview.dims).toEqual([9, 32, 32, 3]);

    // the source patch feature (red-dominant) must appear at the commanded
    // end-of-path cell in the final frame, far from where it started.
    // row 15.5 / f_s = 3.875 -> latent row 4; final group mean col 23 / 4
    // -> latent col 6: pixels rows 16..19, cols 24..27 after decoding
    const last = GEOM.video_frames - 1;
    let redAtEnd = 0;
    for (let r = 16; r < 20; r++)
      for (let c = 24; c < 28; c++)
        redAtEnd = Math.max(redAtEnd, videoAt(preview, last, r, c, 0));
    expect(redAtEnd).toBeGreaterThan(0.1);

    // while the start-of-path region of the final frame stays zero-padded
    let redAtStart = 0;
    for (let r = 16; r < 20; r++)
      for (let c = 0; c < 4; c++)
        redAtStart = Math.max(redAtStart, videoAt(preview, last, r, c, 0));
    expect(redAtStart).toBeLessThan(redAtEnd / 2);
  }, 60_000);

  it("overlay markers and EPE badges match the report JSON to displayed precision", async () => {
    const sid = await client.createSession(GEOM);
    await client.uploadFrame(sid, makeFirstFrame());
    const file = buildTrajectoryFile([stroke], GEOM);
    await client.putTracks(sid, file);

    // overlays render the authored (serialized) positions verbatim
    for (const frame of [0, 4, 8]) {
      const markers = overlayMarkersAtFrame(file.tracks, frame);
      expect(markers[0].x).toBe(file.tracks[0].points[frame][0]);
      expect(markers[0].y).toBe(file.tracks[0].points[frame][1]);
    }

    const rid = await client.generate(sid, { w: 5.0, steps: 8, seed: 1 });
    const { report, video } = await client.getResult(sid, rid);
    expect(video.dims).toEqual([9, 32, 32, 3]);
    expect(report.epe).toBeTypeOf("number");

    const badges = badgesFromReport(report);
    expect(badges).toHaveLength(1);
    const raw = report.per_track_epe?.["0"];
    expect(raw).toBeTypeOf("number");
    expect(badges[0].text).toBe(`EPE ${(raw as number).toFixed(2)} px`);
    expect(badges[0].text).toBe(formatEpeBadge(raw));

    // repeated identical request returns the cached result id
    const ridAgain = await client.generate(sid, { w: 5.0, steps: 8, seed: 1 });
    expect(ridAgain).toBe(rid);
  }, 60_000);
});
