import init, { analyze, decide, color_compare } from "./pkg/pcsp_wasm.js";

const $ = (id) => document.getElementById(id);

const K3 = "structure K3\ndomain 3\nrelation E 2\n0 1\n0 2\n1 0\n1 2\n2 0\n2 1\nend\n";
const K5 = (() => {
  let rows = "";
  for (let a = 0; a < 5; a++) for (let b = 0; b < 5; b++) if (a !== b) rows += `${a} ${b}\n`;
  return `structure K5\ndomain 5\nrelation E 2\n${rows}end\n`;
})();
const C5 = "structure C5\ndomain 5\nrelation E 2\n0 1\n1 0\n1 2\n2 1\n2 3\n3 2\n3 4\n4 3\n4 0\n0 4\nend\n";
const K2 = "structure K2\ndomain 2\nrelation E 2\n0 1\n1 0\nend\n";

function show(el, text) {
  const v = JSON.parse(text);
  el.textContent = JSON.stringify(v, null, 2);
  return v;
}

let last = null;

function draw() {
  const cv = $("co-canvas");
  const ctx = cv.getContext("2d");
  ctx.clearRect(0, 0, cv.width, cv.height);
  if (!last || last.error) return;
  const run = last[$("co-alg").value];
  const n = last.n;
  const r = cv.width / 2 - 20;
  const pos = [...Array(n).keys()].map((i) => {
    const a = (2 * Math.PI * i) / n;
    return [cv.width / 2 + r * Math.cos(a), cv.height / 2 + r * Math.sin(a)];
  });
  ctx.strokeStyle = "rgba(0,0,0,0.08)";
  for (const [u, v] of last.edges) {
    ctx.beginPath();
    ctx.moveTo(...pos[u]);
    ctx.lineTo(...pos[v]);
    ctx.stroke();
  }
  const k = Math.max(run.palette, 1);
  run.colors.forEach((c, i) => {
    ctx.fillStyle = `hsl(${(360 * c) / k}, 70%, 50%)`;
    ctx.beginPath();
    ctx.arc(...pos[i], 5, 0, 2 * Math.PI);
    ctx.fill();
  });
}

await init();

$("an-left").value = K3;
$("an-right").value = K5;
$("dc-inst").value = C5;
$("dc-tmpl").value = K2;

$("an-run").onclick = () => show($("an-out"), analyze($("an-left").value, $("an-right").value));
$("dc-run").onclick = () =>
  show($("dc-out"), decide($("dc-inst").value, $("dc-tmpl").value, Number($("dc-k").value)));
$("co-run").onclick = () => {
  const v = JSON.parse(
    color_compare(
      Number($("co-n").value),
      Number($("co-p").value),
      Number($("co-eps").value),
      BigInt($("co-seed").value),
    ),
  );
  last = v;
  $("co-out").textContent = v.error
    ? v.error
    : ["wigderson", "general", "baseline"]
        .map((a) => `${a}: ${v[a].palette} colours, proper=${v[a].proper}`)
        .join("\n") + `\nrecursion levels: ${v.levels}`;
  draw();
};
$("co-alg").onchange = draw;
