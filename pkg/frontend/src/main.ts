import { ApiClient } from "./api.js";
import { WizardState, type DraftStore } from "./state.js";
import { App } from "./views.js";

const browserStore: DraftStore = {
  get: (key) => window.localStorage.getItem(key),
  set: (key, value) => window.localStorage.setItem(key, value),
  remove: (key) => window.localStorage.removeItem(key),
};

const tokenStore = {
  get: () => window.localStorage.getItem("at.token"),
  set: (token: string | null) => {
    if (token === null) window.localStorage.removeItem("at.token");
    else window.localStorage.setItem("at.token", token);
  },
};

const app = new App(new ApiClient(""), new WizardState(browserStore), tokenStore);
app.mount(document.getElementById("app")!);
