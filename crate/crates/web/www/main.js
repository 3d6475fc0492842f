import init, { compareModels, boxReport, sphereReport, sphereDepthAt, frameSize } from "./pkg/rgbd_lift_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function paint(canvas, rgba, w, h) {
  canvas.width = w;
  canvas.height = h;
  canvas.getContext("2d").putImageData(new ImageData(new Uint8ClampedArray(rgba), w, h), 0, 0);
}

function guarded(out, f) {
  try {
    out.classList.remove("err");
    f();
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e.message ?? e);
  }
}

await init();
const [W, H] = frameSize();

function updateBackProjection() {
  const out = $("bp-out");
  guarded(out, () => {
    const p = compareModels(num("bp-col"), num("bp-row"), num("bp-d"), num("bp-fx"), num("bp-fy"));
    const f = (a) => a.map((v) => v.toFixed(2).padStart(9)).join(" ");
    const dz = p[2] - p[5];
    out.textContent = `planar_z      ${f(p.slice(0, 3))}\nray_distance  ${f(p.slice(3))}\nz difference  ${dz.toFixed(2)} mm`;
  });
}

function updateBox() {
  const out = $("bx-out");
  guarded(out, () => {
    const r = boxReport(num("bx-w"), num("bx-h"), num("bx-d"), num("bx-fx"), num("bx-j"),
      num("bx-dil"), num("bx-hw"), num("bx-trim"));
    const tol = (2 * num("bx-d")) / num("bx-fx");
    out.textContent =
      `width  ${r.width_mm.toFixed(2)} mm (err ${(r.width_mm - num("bx-w")).toFixed(2)})\n` +
      `height ${r.height_mm.toFixed(2)} mm (err ${(r.height_mm - num("bx-h")).toFixed(2)})\n` +
      `tolerance ±${tol.toFixed(2)} mm, kept ${r.kept}, band-rejected ${r.dropped_by_band} (red)`;
    paint($("bx-canvas"), r.rgba(), W, H);
    r.free();
  });
}

function updateSphere() {
  const out = $("sp-out");
  guarded(out, () => {
    const r = sphereReport(num("sp-x"), num("sp-z"), num("sp-r"), num("sp-fx"));
    out.textContent =
      `max |residual| ray_distance ${r.max_residual_ray.toFixed(3)} mm\n` +
      `max |residual| planar_z     ${r.max_residual_planar.toFixed(3)} mm`;
    paint($("sp-canvas"), r.heatmap(), W, H);
    r.free();
  });
}

$("sp-canvas").addEventListener("mousemove", (ev) => {
  const c = ev.currentTarget;
  const col = Math.floor((ev.offsetX * W) / c.clientWidth);
  const row = Math.floor((ev.offsetY * H) / c.clientHeight);
  const z = sphereDepthAt(col, row, num("sp-x"), num("sp-z"), num("sp-r"), num("sp-fx"));
  c.title = Number.isNaN(z) ? `(${col}, ${row}) background` : `(${col}, ${row}) z=${z.toFixed(1)} mm`;
});

for (const [prefix, f] of [["bp-", updateBackProjection], ["bx-", updateBox], ["sp-", updateSphere]]) {
  document.querySelectorAll(`input[id^="${prefix}"]`).forEach((el) => el.addEventListener("input", f));
  f();
}
