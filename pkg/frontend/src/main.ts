import { ReviewApi } from "./api.js";
import { ReviewApp } from "./app.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");

const params = new URLSearchParams(window.location.search);
const app = new ReviewApp(root, new ReviewApi(""), {
  annotator: params.get("annotator") ?? "anonymous",
});
void app.start();
