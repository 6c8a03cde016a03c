// Glue generated by `wasm-bindgen --target web` lives in ./pkg (see README).
import init, { color_square, greedy_partition, mu } from "./pkg/thinset_web.js";

const COLORS = ["", "#e4572e", "#29335c", "#f3a712"];
const $ = (id) => document.getElementById(id);

function guard(out, f) {
  try {
    out.classList.remove("err");
    f();
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e);
  }
}

function drawSquare() {
  const out = $("color-out");
  guard(out, () => {
    const r = JSON.parse(color_square(Number($("depth").value)));
    const canvas = $("square");
    const ctx = canvas.getContext("2d");
    const cell = canvas.width / r.side;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    r.colors.forEach((c, i) => {
      ctx.fillStyle = COLORS[c];
      ctx.fillRect((i % r.side) * cell, Math.floor(i / r.side) * cell, cell, cell);
    });
    out.textContent = `${r.side} x ${r.side} cells; containments ${r.containments ? "hold" : "FAIL"}`;
  });
}

function partition() {
  const out = $("part-out");
  guard(out, () => {
    const r = JSON.parse(greedy_partition($("points").value, Number($("m").value), Number($("window").value)));
    const lines = r.parts.map((p, i) => `part ${i + 1}: {${p.join(", ")}}`);
    r.radii.forEach((n, i) => {
      lines.push(`F${n}: exempt prefix ${r.exempt_bounds[i]}, parts 1-thin beyond it: ${r.verified[i] ? "yes" : "NO"}`);
    });
    out.textContent = lines.join("\n");
  });
}

function partitionNumber() {
  const out = $("mu-out");
  guard(out, () => {
    const r = JSON.parse(mu($("size").value, $("kappa").value));
    out.textContent = `${r.text}\n(formula case ${r.branch})`;
  });
}

await init();
$("color-go").onclick = drawSquare;
$("part-go").onclick = partition;
$("mu-go").onclick = partitionNumber;
drawSquare();
partition();
partitionNumber();
